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

#include <algorithm>
#include <deque>
#include <istream>
#include <random>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "deltanet/engine.h"

namespace deltanet {

int Topology::AddNode(absl::string_view name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  adjacency_.emplace_back();
  host_.push_back(false);
  return id;
}

absl::Status Topology::AddEdge(absl::string_view a, absl::string_view b) {
  if (a == b) {
    return absl::InvalidArgumentError(absl::StrCat("self-loop edge at ", a));
  }
  if (a == kDropNodeName || b == kDropNodeName) {
    return absl::InvalidArgumentError("DROP is reserved");
  }
  const int u = AddNode(a);
  const int v = AddNode(b);
  auto& nu = adjacency_[u];
  auto pos = std::lower_bound(nu.begin(), nu.end(), v);
  if (pos != nu.end() && *pos == v) return absl::OkStatus();
  nu.insert(pos, v);
  auto& nv = adjacency_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  edges_.emplace_back(u, v);
  return absl::OkStatus();
}

void Topology::MarkHost(absl::string_view name) { host_[AddNode(name)] = true; }

std::optional<int> Topology::Find(absl::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> Topology::host_nodes() const {
  std::vector<int> out;
  for (size_t i = 0; i < host_.size(); ++i) {
    if (host_[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Topology::DistancesTo(int node) const {
  std::vector<int> dist(names_.size(), -1);
  std::deque<int> queue = {node};
  dist[node] = 0;
  while (!queue.empty()) {
    const int at = queue.front();
    queue.pop_front();
    for (int next : adjacency_[at]) {
      if (dist[next] >= 0) continue;
      dist[next] = dist[at] + 1;
      queue.push_back(next);
    }
  }
  return dist;
}

size_t Topology::ComponentCount() const {
  std::vector<char> seen(names_.size(), 0);
  size_t components = 0;
  for (size_t start = 0; start < names_.size(); ++start) {
    if (seen[start]) continue;
    ++components;
    std::vector<int> stack = {static_cast<int>(start)};
    seen[start] = 1;
    while (!stack.empty()) {
      const int at = stack.back();
      stack.pop_back();
      for (int next : adjacency_[at]) {
        if (!seen[next]) {
          seen[next] = 1;
          stack.push_back(next);
        }
      }
    }
  }
  return components;
}

absl::StatusOr<Topology> ParseTopology(std::istream& in) {
  Topology topo;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<absl::string_view> fields = absl::StrSplit(line, ' ');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("topology line ", line_no,
                       ": expected '<node> <node>' or 'host <node>'"));
    }
    if (fields[0] == "host") {
      if (fields[1] == kDropNodeName) {
        return absl::InvalidArgumentError(
            absl::StrCat("topology line ", line_no, ": DROP is reserved"));
      }
      topo.MarkHost(fields[1]);
      continue;
    }
    if (absl::Status s = topo.AddEdge(fields[0], fields[1]); !s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("topology line ", line_no, ": ", s.message()));
    }
  }
  return topo;
}

std::string FormatTopology(const Topology& topology) {
  std::string out;
  for (const auto& [u, v] : topology.edges()) {
    absl::StrAppend(&out, topology.name(u), " ", topology.name(v), "\n");
  }
  for (int h : topology.host_nodes()) {
    absl::StrAppend(&out, "host ", topology.name(h), "\n");
  }
  return out;
}

Topology MakeRingTopology(int nodes) {
  Topology topo;
  for (int i = 1; i <= nodes; ++i) topo.AddNode(absl::StrCat("s", i));
  for (int i = 1; i <= nodes && nodes > 1; ++i) {
    const int next = i % nodes + 1;
    if (next == i) continue;
    (void)topo.AddEdge(absl::StrCat("s", i), absl::StrCat("s", next));
  }
  return topo;
}

Topology MakeRandomTopology(int nodes, int extra_edges, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Topology topo;
  for (int i = 1; i <= nodes; ++i) topo.AddNode(absl::StrCat("s", i));
  for (int i = 2; i <= nodes; ++i) {
    const int parent = 1 + static_cast<int>(rng() % static_cast<uint64_t>(i - 1));
    (void)topo.AddEdge(absl::StrCat("s", i), absl::StrCat("s", parent));
  }
  for (int added = 0, attempts = 0; added < extra_edges && attempts < 100 * (extra_edges + 1);
       ++attempts) {
    const int a = 1 + static_cast<int>(rng() % static_cast<uint64_t>(nodes));
    const int b = 1 + static_cast<int>(rng() % static_cast<uint64_t>(nodes));
    if (a == b) continue;
    const size_t before = topo.edges().size();
    (void)topo.AddEdge(absl::StrCat("s", a), absl::StrCat("s", b));
    if (topo.edges().size() > before) ++added;
  }
  return topo;
}

}  // namespace deltanet
