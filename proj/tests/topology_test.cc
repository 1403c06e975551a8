// Copyright 2026 The deltanet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deltanet/topology.h"

#include <sstream>

#include "gtest/gtest.h"

namespace deltanet {
namespace {

absl::StatusOr<Topology> Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseTopology(in);
}

TEST(TopologyTest, ParsesEdgesAndHosts) {
  absl::StatusOr<Topology> t = Parse("# ring\ns1 s2\ns2 s3\n\nhost s3\ns3 s1\n");
  ASSERT_TRUE(t.ok()) << t.status();
  EXPECT_EQ(t->node_count(), 3u);
  EXPECT_EQ(t->edges().size(), 3u);
  EXPECT_EQ(t->host_nodes(), std::vector<int>{2});
  EXPECT_EQ(t->neighbors(0), (std::vector<int>{1, 2}));
  EXPECT_EQ(t->ComponentCount(), 1u);
}

TEST(TopologyTest, DuplicateEdgesIgnored) {
  absl::StatusOr<Topology> t = Parse("a b\nb a\na b\n");
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->edges().size(), 1u);
}

TEST(TopologyTest, Errors) {
  EXPECT_FALSE(Parse("a\n").ok());
  EXPECT_FALSE(Parse("a b c\n").ok());
  EXPECT_FALSE(Parse("a a\n").ok());
  EXPECT_FALSE(Parse("a DROP\n").ok());
  EXPECT_FALSE(Parse("host DROP\n").ok());
  absl::StatusOr<Topology> t = Parse("a b\n\nc  d\n");
  ASSERT_FALSE(t.ok());
  EXPECT_NE(t.status().message().find("line 3"), absl::string_view::npos);
}

TEST(TopologyTest, Components) {
  absl::StatusOr<Topology> t = Parse("a b\nc d\nhost e\n");
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(t->ComponentCount(), 3u);
  EXPECT_EQ(t->DistancesTo(0), (std::vector<int>{0, 1, -1, -1, -1}));
}

TEST(TopologyTest, RoundTrip) {
  const std::string text = "s1 s2\ns2 s3\ns3 s1\nhost s1\nhost s3\n";
  absl::StatusOr<Topology> t = Parse(text);
  ASSERT_TRUE(t.ok());
  EXPECT_EQ(FormatTopology(*t), text);
  const Topology random = MakeRandomTopology(30, 20, 9);
  absl::StatusOr<Topology> back = Parse(FormatTopology(random));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(FormatTopology(*back), FormatTopology(random));
}

TEST(TopologyTest, Makers) {
  const Topology ring = MakeRingTopology(4);
  EXPECT_EQ(FormatTopology(ring), "s1 s2\ns2 s3\ns3 s4\ns4 s1\n");
  const Topology random = MakeRandomTopology(30, 15, 1);
  EXPECT_EQ(random.node_count(), 30u);
  EXPECT_EQ(random.edges().size(), 29u + 15u);
  EXPECT_EQ(random.ComponentCount(), 1u);
  EXPECT_EQ(FormatTopology(MakeRandomTopology(30, 15, 1)), FormatTopology(random));
}

}  // namespace
}  // namespace deltanet
