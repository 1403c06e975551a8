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

// Independent reference computations shared by the tests.

#ifndef DELTANET_TESTS_TESTING_ORACLES_H_
#define DELTANET_TESTS_TESTING_ORACLES_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/types/span.h"
#include "deltanet/address_sim.h"
#include "deltanet/analysis.h"
#include "deltanet/engine.h"
#include "deltanet/trace.h"

namespace deltanet::testing {

// Non-empty link labels as coalesced intervals, keyed by node names.
using ConcreteLabels =
    std::map<std::pair<std::string, std::string>, std::vector<Interval>>;
ConcreteLabels LabelsOf(const Engine& engine);

absl::Status ApplyAll(Engine& engine, absl::Span<const TraceOp> ops);
absl::Status ApplyAll(AddressSim& sim, absl::Span<const TraceOp> ops);

// Cycle (by node name, rotated to start at the smallest name, without the
// closing repeat) -> addresses forwarded around it.
using LoopSet = std::map<std::vector<std::string>, std::set<uint64_t>>;

// Loops through any changed (node, address) pair, walking the simulator.
LoopSet SimLoops(const AddressSim& sim,
                 absl::Span<const AddressSim::Change> changes);
LoopSet EngineLoops(const Engine& engine,
                    absl::Span<const LoopReport> reports);

// Boolean transitive closure (paths of one or more hops) of the simulator's
// forwarding graph for one address, indexed by simulator node.
std::vector<std::vector<bool>> SimClosure(const AddressSim& sim,
                                          const Address& addr);

// Empty if the closure agrees with the simulator at every atom; otherwise a
// description of the first difference.
std::string CompareClosure(const Engine& engine, const ClosureMatrix& closure,
                           const AddressSim& sim);

}  // namespace deltanet::testing

#endif  // DELTANET_TESTS_TESTING_ORACLES_H_
