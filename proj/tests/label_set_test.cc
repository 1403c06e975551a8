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

#include "deltanet/label_set.h"

#include <random>
#include <set>

#include "gtest/gtest.h"

namespace deltanet {
namespace {

TEST(LabelSetTest, SetTestReset) {
  LabelSet s;
  EXPECT_TRUE(s.Empty());
  s.Set(3);
  s.Set(700);
  EXPECT_TRUE(s.Test(3));
  EXPECT_TRUE(s.Test(700));
  EXPECT_FALSE(s.Test(4));
  EXPECT_FALSE(s.Test(100000));
  EXPECT_EQ(s.Count(), 2u);
  s.Reset(700);
  s.Reset(99999);
  EXPECT_EQ(s.ToVector(), std::vector<AtomId>{3});
}

TEST(LabelSetTest, EqualityIgnoresCapacity) {
  LabelSet a, b;
  a.Set(1);
  b.Set(1);
  b.Set(5000);
  b.Reset(5000);
  EXPECT_EQ(a, b);
}

TEST(LabelSetTest, FirstN) {
  EXPECT_EQ(LabelSet::FirstN(0).Count(), 0u);
  EXPECT_EQ(LabelSet::FirstN(64).Count(), 64u);
  const LabelSet s = LabelSet::FirstN(130);
  EXPECT_TRUE(s.Test(129));
  EXPECT_FALSE(s.Test(130));
}

// Every operation against std::set.
TEST(LabelSetTest, MatchesStdSet) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    LabelSet a, b;
    std::set<AtomId> sa, sb;
    const int n = static_cast<int>(rng() % 40);
    const AtomId span = 1 + static_cast<AtomId>(rng() % 2000);
    for (int i = 0; i < n; ++i) {
      const AtomId x = rng() % span, y = rng() % span;
      a.Set(x);
      sa.insert(x);
      b.Set(y);
      sb.insert(y);
    }
    auto as_set = [](const LabelSet& s) {
      std::vector<AtomId> v = s.ToVector();
      return std::set<AtomId>(v.begin(), v.end());
    };
    std::set<AtomId> want;
    std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(),
                   std::inserter(want, want.end()));
    EXPECT_EQ(as_set(a | b), want);
    want.clear();
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                          std::inserter(want, want.end()));
    EXPECT_EQ(as_set(a & b), want);
    EXPECT_EQ(a.Intersects(b), !want.empty());
    LabelSet c = a;
    c.UniteWithIntersection(a, b);
    EXPECT_EQ(c, a);
    LabelSet empty;
    empty.UniteWithIntersection(a, b);
    EXPECT_EQ(as_set(empty), want);
    want.clear();
    std::set_difference(sa.begin(), sa.end(), sb.begin(), sb.end(),
                        std::inserter(want, want.end()));
    LabelSet d = a;
    d.Subtract(b);
    EXPECT_EQ(as_set(d), want);
    EXPECT_TRUE(d.IsSubsetOf(a));
    EXPECT_EQ(a.IsSubsetOf(b),
              std::includes(sb.begin(), sb.end(), sa.begin(), sa.end()));
    std::vector<AtomId> seen;
    a.ForEach([&](AtomId x) { seen.push_back(x); });
    EXPECT_EQ(seen, std::vector<AtomId>(sa.begin(), sa.end()));
  }
}

}  // namespace
}  // namespace deltanet
