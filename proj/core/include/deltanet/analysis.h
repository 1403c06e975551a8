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

// Property checks over the labelled forwarding graph of an `Engine`.

#ifndef DELTANET_ANALYSIS_H_
#define DELTANET_ANALYSIS_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "deltanet/address.h"
#include "deltanet/atom_map.h"
#include "deltanet/engine.h"
#include "deltanet/label_set.h"

namespace deltanet {

// Concrete intervals of `atoms`, ascending. With `coalesce`, adjacent
// intervals are merged.
std::vector<Interval> IntervalsOf(const AtomMap& map, const LabelSet& atoms,
                                  bool coalesce = true);

// --- forwarding loops ------------------------------------------------------

struct LoopReport {
  // Elementary cycle, rotated so the smallest node id comes first, with the
  // first node repeated at the end.
  std::vector<NodeId> cycle;
  // Atoms forwarded all the way around the cycle. Never empty.
  LabelSet atoms;
  // `atoms` as coalesced address intervals.
  std::vector<Interval> witness;
};

// Every elementary cycle of the current graph around which some atom is
// forwarded and which uses a (link, atom) pair added by `delta`. One report
// per cycle, ordered by cycle. `delta` must come from `engine`'s latest
// operations.
std::vector<LoopReport> CheckLoops(const Engine& engine,
                                   const DeltaGraph& delta);

// --- reachability ------------------------------------------------------------

// Atoms that can travel from `src` to `dst` along links whose labels carry
// them. `src == dst` yields every atom (the empty path).
absl::StatusOr<LabelSet> ReachableAtoms(const Engine& engine, NodeId src,
                                        NodeId dst);

class ClosureMatrix {
 public:
  explicit ClosureMatrix(size_t nodes) : n_(nodes), cells_(nodes * nodes) {}

  size_t size() const { return n_; }
  LabelSet& at(NodeId from, NodeId to) { return cells_[from * n_ + to]; }
  const LabelSet& at(NodeId from, NodeId to) const {
    return cells_[from * n_ + to];
  }

 private:
  size_t n_;
  std::vector<LabelSet> cells_;
};

// For every ordered node pair, the atoms forwarded from the first to the
// second along a path of one or more links. Floyd-Warshall with union and
// intersection; O(K * |V|^3) bit operations.
ClosureMatrix AllPairsClosure(const Engine& engine);

// --- link failures -----------------------------------------------------------

enum class FailureCheck {
  // Affected atoms and their current flows only; never mutates the engine.
  kReportOnly,
  // Classify affected atoms and run the loop check on the failure delta.
  kLoops,
  // Classify affected atoms.
  kBlackholes,
};

enum class FailureVerdict {
  // Still ends where it ended before the failure.
  kRerouted,
  // Ends elsewhere: at a node with no matching rule, or dropped. This is an
  // extension beyond loop checking.
  kBlackholed,
  // Revisits a node.
  kLooping,
};

absl::string_view VerdictName(FailureVerdict verdict);

struct FailureOutcome {
  FailureVerdict verdict;
  // Source of the failed link the atoms were using.
  NodeId start;
  LabelSet atoms;
  // Hypothetical path from `start` once the links are gone.
  std::vector<NodeId> path;
};

struct AffectedFlow {
  LinkId link;
  LabelSet atoms;
};

struct FailureReport {
  FailureCheck check = FailureCheck::kReportOnly;
  std::vector<LinkId> failed;
  // Union of the failed links' labels at query time.
  LabelSet affected;
  // Every link currently carrying affected atoms, with those atoms.
  std::vector<AffectedFlow> flows;
  // Per class of atoms with identical fate; empty for kReportOnly.
  std::vector<FailureOutcome> outcomes;
  // Loops introduced by the failure; filled for kLoops only.
  std::vector<LoopReport> loops;

  // Loops always count; blackholed outcomes only under kBlackholes.
  bool HasViolations() const;
};

// Affected atoms of failing `links` and the subgraph of their current flows.
FailureReport ReportAffectedFlows(const Engine& engine,
                                  absl::Span<const LinkId> links);

// Answers "what happens to the packets using these links if they fail" by
// removing every rule forwarding along them, classifying the affected atoms
// in that state, and reinstalling the rules. The engine's logical state is
// unchanged on return. Unregistered links are a NotFound error.
absl::StatusOr<FailureReport> WhatIfFailLinks(Engine& engine,
                                              absl::Span<const Link> links,
                                              FailureCheck check);

// --- serialization -------------------------------------------------------------

enum class ReportFormat { kText, kMachine };

// One line, no trailing newline. The machine form is a JSON object with a
// fixed field order.
std::string FormatLoopReport(const Engine& engine, const LoopReport& report,
                             ReportFormat format);

// One line per record, each newline-terminated: a header, then one per
// outcome, loop and (machine form only) affected flow.
std::string FormatFailureReport(const Engine& engine,
                                const FailureReport& report,
                                ReportFormat format);

}  // namespace deltanet

#endif  // DELTANET_ANALYSIS_H_
