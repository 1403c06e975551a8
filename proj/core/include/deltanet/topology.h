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

// Undirected network topologies.
//
// File format, one entry per line:
//   <node> <node>     an undirected edge
//   host <node>       marks an attachment point for destination prefixes
// Lines starting with '#' and blank lines are ignored. Node indices follow
// first appearance.

#ifndef DELTANET_TOPOLOGY_H_
#define DELTANET_TOPOLOGY_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace deltanet {

class Topology {
 public:
  int AddNode(absl::string_view name);
  // Adds an undirected edge; duplicates are ignored.
  absl::Status AddEdge(absl::string_view a, absl::string_view b);
  void MarkHost(absl::string_view name);

  std::optional<int> Find(absl::string_view name) const;
  const std::string& name(int node) const { return names_[node]; }
  size_t node_count() const { return names_.size(); }
  // Ascending by index.
  const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }
  bool is_host(int node) const { return host_[node]; }
  std::vector<int> host_nodes() const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  size_t ComponentCount() const;
  // Hop distance from every node to `node`; -1 when unreachable.
  std::vector<int> DistancesTo(int node) const;

 private:
  std::vector<std::string> names_;
  absl::flat_hash_map<std::string, int> index_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<bool> host_;
  std::vector<std::pair<int, int>> edges_;
};

absl::StatusOr<Topology> ParseTopology(std::istream& in);

// Edges in insertion order, then host marks in index order.
std::string FormatTopology(const Topology& topology);

// Nodes s1..sn joined in a cycle.
Topology MakeRingTopology(int nodes);

// A random spanning tree over s1..sn plus `extra_edges` random chords.
// Deterministic in `seed`.
Topology MakeRandomTopology(int nodes, int extra_edges, uint64_t seed);

}  // namespace deltanet

#endif  // DELTANET_TOPOLOGY_H_
