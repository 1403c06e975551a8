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

// Single-field equivalence-class baseline: rules indexed by a binary trie on
// their prefix bits, with per-class forwarding graphs built on demand.

#ifndef DELTANET_TRIE_BASELINE_H_
#define DELTANET_TRIE_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "deltanet/address.h"
#include "deltanet/engine.h"
#include "deltanet/prefix.h"
#include "deltanet/trace.h"

namespace deltanet {

class TrieBaseline {
 public:
  struct StoredRule {
    RuleId id;
    int source;
    int target;
    Priority priority;
    IpPrefix prefix;
    Interval match;
  };
  struct Edge {
    int source;
    int target;
    RuleId rule;
  };
  struct EquivalenceClass {
    Interval range;
    std::vector<Edge> graph;  // ascending by source
  };

  explicit TrieBaseline(AddressSpace space);

  absl::Status Apply(const TraceOp& op);
  // Applies `op`, then returns the classes its prefix affects.
  absl::StatusOr<std::vector<EquivalenceClass>> ApplyAndCheck(
      const TraceOp& op);

  // Rules whose prefix is an ancestor, a descendant, or equal to `p`.
  std::vector<const StoredRule*> Overlapping(const IpPrefix& p) const;

  // Segments of `p` cut at the bounds of every overlapping rule, each with
  // the forwarding graph of the best matching rule per node.
  std::vector<EquivalenceClass> AffectedEcs(const IpPrefix& p) const;

  // The classes affected by the rules on the given links, deduplicated.
  std::vector<EquivalenceClass> LinkFailureEcs(
      absl::Span<const std::pair<int, int>> links) const;

  // True if the class's forwarding graph contains a cycle.
  static bool HasLoop(const EquivalenceClass& ec);

  std::optional<int> FindNode(absl::string_view name) const;
  const std::string& node_name(int node) const { return names_[node]; }
  size_t node_count() const { return names_.size(); }
  size_t rule_count() const { return rules_.size(); }
  // Distinct (source, target) pairs with at least one rule.
  std::vector<std::pair<int, int>> Links() const;

 private:
  struct TrieNode {
    int32_t child[2] = {-1, -1};
    std::vector<RuleId> rules;
  };

  int Intern(absl::string_view name);
  // The trie node for `p`, creating the path when `create`; -1 if absent.
  int32_t Locate(const IpPrefix& p, bool create);
  int32_t Find(const IpPrefix& p) const;
  std::vector<EquivalenceClass> Classify(
      const Interval& range, absl::Span<const StoredRule* const> rules) const;

  AddressSpace space_;
  std::vector<TrieNode> trie_;
  absl::flat_hash_map<RuleId, StoredRule> rules_;
  absl::flat_hash_map<std::pair<int, int>, absl::flat_hash_set<RuleId>>
      by_link_;
  std::vector<std::string> names_;
  absl::flat_hash_map<std::string, int> index_;
};

}  // namespace deltanet

#endif  // DELTANET_TRIE_BASELINE_H_
