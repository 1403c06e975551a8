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

// Synthetic datasets: shortest-path forwarding rules toward each prefix's
// destination, optionally followed by removal of every rule.

#ifndef DELTANET_GENERATOR_H_
#define DELTANET_GENERATOR_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "deltanet/prefix.h"
#include "deltanet/topology.h"
#include "deltanet/trace.h"

namespace deltanet {

enum class PriorityPolicy { kRandom, kLongestPrefix };
enum class RemovalPolicy { kNone, kRandomOrder };

struct GeneratorOptions {
  PriorityPolicy priority = PriorityPolicy::kRandom;
  RemovalPolicy removal = RemovalPolicy::kRandomOrder;
  uint64_t seed = 1;
};

// A prefix and the topology node it is attached to.
struct Route {
  IpPrefix prefix;
  int destination = 0;
};

struct GeneratedDataset {
  std::vector<TraceOp> ops;
  size_t rules = 0;
  size_t distinct_prefixes = 0;
  // Routes whose destination some node could not reach; those nodes get
  // no rule for the route.
  size_t unreachable = 0;
};

// Attaches prefixes to host-marked nodes in turn, or to all nodes when
// none is marked. Duplicate prefixes are dropped, keeping the first.
std::vector<Route> AssignRoundRobin(const Topology& topology,
                                    absl::Span<const IpPrefix> prefixes);

absl::StatusOr<GeneratedDataset> GenerateDataset(
    const Topology& topology, absl::Span<const Route> routes,
    const GeneratorOptions& options);

// One prefix per line; '#' comments and blank lines skipped.
absl::StatusOr<std::vector<IpPrefix>> ParsePrefixList(std::istream& in,
                                                      const AddressSpace& space);

// Lines of `<prefix> <node>`.
absl::StatusOr<std::vector<Route>> ParseAssignment(std::istream& in,
                                                   const Topology& topology,
                                                   const AddressSpace& space);

// IPv4 prefixes shaped loosely like a BGP table: clusters of adjacent /24s
// under random /16 blocks, some covering aggregates, a few short prefixes.
// Distinct, deterministic in `seed`.
std::vector<IpPrefix> SyntheticPrefixes(size_t count, uint64_t seed);

}  // namespace deltanet

#endif  // DELTANET_GENERATOR_H_
