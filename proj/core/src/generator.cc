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

#include "deltanet/generator.h"

#include <algorithm>
#include <istream>
#include <random>
#include <string>
#include <utility>

#include "absl/container/btree_set.h"
#include "absl/container/flat_hash_set.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "deltanet/engine.h"

namespace deltanet {
namespace {

// Mask off host bits so that the array index is the canonical form.
IpPrefix Canonical(uint64_t base, int length) {
  const uint64_t mask =
      length == 0 ? 0 : (~uint64_t{0} << (32 - length)) & 0xffffffffull;
  return IpPrefix{Address(base & mask), length};
}

Priority DrawPriority(std::mt19937_64& rng) {
  return static_cast<Priority>(rng() >> 33);
}

}  // namespace

std::vector<Route> AssignRoundRobin(const Topology& topology,
                                    absl::Span<const IpPrefix> prefixes) {
  std::vector<int> hosts = topology.host_nodes();
  if (hosts.empty()) {
    for (size_t i = 0; i < topology.node_count(); ++i) {
      hosts.push_back(static_cast<int>(i));
    }
  }
  std::vector<Route> routes;
  if (hosts.empty()) return routes;
  absl::flat_hash_set<std::pair<Address, int>> seen;
  for (const IpPrefix& p : prefixes) {
    if (!seen.insert({p.base, p.length}).second) continue;
    routes.push_back(Route{p, hosts[routes.size() % hosts.size()]});
  }
  return routes;
}

absl::StatusOr<GeneratedDataset> GenerateDataset(
    const Topology& topology, absl::Span<const Route> routes,
    const GeneratorOptions& options) {
  std::mt19937_64 rng(options.seed);
  GeneratedDataset out;
  absl::btree_set<std::pair<Address, int>> distinct;
  // Next hop toward each destination, computed once per destination.
  std::vector<std::vector<int>> next_hop(topology.node_count());
  RuleId next_id = 1;
  for (const Route& route : routes) {
    if (route.destination < 0 ||
        static_cast<size_t>(route.destination) >= topology.node_count()) {
      return absl::InvalidArgumentError(
          absl::StrCat("route destination ", route.destination,
                       " is not a topology node"));
    }
    std::vector<int>& hops = next_hop[route.destination];
    if (hops.empty()) {
      const std::vector<int> dist = topology.DistancesTo(route.destination);
      hops.assign(topology.node_count(), -1);
      for (size_t s = 0; s < topology.node_count(); ++s) {
        if (dist[s] <= 0) continue;
        for (int n : topology.neighbors(static_cast<int>(s))) {
          if (dist[n] == dist[s] - 1) {
            hops[s] = n;
            break;
          }
        }
      }
    }
    distinct.insert({route.prefix.base, route.prefix.length});
    for (size_t s = 0; s < topology.node_count(); ++s) {
      if (static_cast<int>(s) == route.destination) continue;
      if (hops[s] < 0) {
        ++out.unreachable;
        continue;
      }
      const Priority prio = options.priority == PriorityPolicy::kLongestPrefix
                                ? static_cast<Priority>(route.prefix.length)
                                : DrawPriority(rng);
      out.ops.push_back(TraceOp::Add(next_id++, topology.name(s),
                                     topology.name(hops[s]), prio,
                                     route.prefix));
    }
  }
  out.rules = out.ops.size();
  out.distinct_prefixes = distinct.size();
  if (options.removal == RemovalPolicy::kRandomOrder) {
    std::vector<RuleId> order(out.rules);
    for (size_t i = 0; i < order.size(); ++i) order[i] = i + 1;
    // Written out rather than std::shuffle so that output does not depend on
    // the standard library's distribution implementation.
    for (size_t i = order.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(rng() % i);
      std::swap(order[i - 1], order[j]);
    }
    for (RuleId id : order) out.ops.push_back(TraceOp::Del(id));
  }
  return out;
}

absl::StatusOr<std::vector<IpPrefix>> ParsePrefixList(
    std::istream& in, const AddressSpace& space) {
  std::vector<IpPrefix> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    absl::StatusOr<IpPrefix> p = ParsePrefix(line, space);
    if (!p.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "prefix list line ", line_no, ": ", p.status().message()));
    }
    out.push_back(*p);
  }
  return out;
}

absl::StatusOr<std::vector<Route>> ParseAssignment(std::istream& in,
                                                   const Topology& topology,
                                                   const AddressSpace& space) {
  std::vector<Route> out;
  absl::flat_hash_set<std::pair<Address, int>> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<absl::string_view> f = absl::StrSplit(line, ' ');
    if (f.size() != 2) {
      return absl::InvalidArgumentError(absl::StrCat(
          "assignment line ", line_no, ": expected '<prefix> <node>'"));
    }
    absl::StatusOr<IpPrefix> p = ParsePrefix(f[0], space);
    if (!p.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "assignment line ", line_no, ": ", p.status().message()));
    }
    std::optional<int> node = topology.Find(f[1]);
    if (!node.has_value()) {
      return absl::NotFoundError(absl::StrCat(
          "assignment line ", line_no, ": unknown node '", f[1], "'"));
    }
    if (!seen.insert({p->base, p->length}).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "assignment line ", line_no, ": prefix assigned twice"));
    }
    out.push_back(Route{*p, *node});
  }
  return out;
}

std::vector<IpPrefix> SyntheticPrefixes(size_t count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<IpPrefix> out;
  absl::flat_hash_set<std::pair<Address, int>> seen;
  auto emit = [&](uint64_t base, int length) {
    if (out.size() >= count) return;
    IpPrefix p = Canonical(base, length);
    if (seen.insert({p.base, p.length}).second) out.push_back(p);
  };
  while (out.size() < count) {
    // Avoid the reserved first and last /8s.
    const uint64_t block = (1 + rng() % 223) << 24 | (rng() & 0xff) << 16;
    const double roll = coin(rng);
    if (roll < 0.005) emit(block, 8);
    else if (roll < 0.02) emit(block, 12);
    if (coin(rng) < 0.3) emit(block, 16);
    const uint64_t run = 1 + rng() % 12;
    const uint64_t first = rng() % (256 - run);
    if (coin(rng) < 0.25) emit(block | first << 8, 20 + static_cast<int>(rng() % 4));
    for (uint64_t i = 0; i < run; ++i) {
      const uint64_t net = block | (first + i) << 8;
      // Occasionally a more specific route under the /24.
      if (coin(rng) < 0.05) emit(net | (rng() & 0xff), 25 + static_cast<int>(rng() % 4));
      emit(net, 24);
    }
  }
  return out;
}

}  // namespace deltanet
