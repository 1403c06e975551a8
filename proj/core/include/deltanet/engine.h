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

// Network-wide forwarding state as a single atom-labelled graph.
//
// Every rule belongs to a directed link (source -> target). For every atom
// and node, the node's highest-priority rule covering that atom (its owner)
// decides which outgoing link carries the atom. `Engine` keeps the label of
// every link exact under rule insertion and removal, touching only the
// atoms of the changed rule plus at most two split atoms per insertion.

#ifndef DELTANET_ENGINE_H_
#define DELTANET_ENGINE_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/container/inlined_vector.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "deltanet/address.h"
#include "deltanet/atom_map.h"
#include "deltanet/label_set.h"

namespace deltanet {

using NodeId = uint32_t;
using LinkId = uint32_t;
using RuleId = uint64_t;
using Priority = uint32_t;

// Sink for dropped packets. It exists in every engine and has no out-links.
inline constexpr NodeId kDropNode = 0;
inline constexpr absl::string_view kDropNodeName = "DROP";

struct Link {
  NodeId source = 0;
  NodeId target = 0;

  friend bool operator==(const Link& a, const Link& b) {
    return a.source == b.source && a.target == b.target;
  }
  template <typename H>
  friend H AbslHashValue(H h, const Link& l) {
    return H::combine(std::move(h), l.source, l.target);
  }
};

struct Rule {
  RuleId id = 0;
  Link link;
  Priority priority = 0;
  Interval match;
};

// Label changes on one link, relative to the state before the operation.
// Atoms created by a split inherit the labels of the atom they split from,
// so a split alone never shows up here.
using AtomList = absl::InlinedVector<AtomId, 4>;

struct LinkDelta {
  LinkId link = 0;
  AtomList added;    // ascending
  AtomList removed;  // ascending
};

// Result of one or more rule operations.
struct DeltaGraph {
  std::vector<LinkDelta> links;  // ascending by link id
  DeltaPairs splits;
  // Atoms of the changed rule that the operation visited.
  size_t atoms_touched = 0;
  // The inserted rule overlaps a rule of equal priority at its source.
  bool priority_conflict = false;

  bool empty() const { return links.empty(); }
  size_t changed_label_count() const { return links.size(); }

  // Folds a later delta into this one. An atom added then removed on the
  // same link (or vice versa) cancels out.
  void Merge(const DeltaGraph& later);
};

struct EngineOptions {
  // Fault injection for oracle tests: when set, removing an owning rule
  // does not hand the atom to the next-highest rule.
  bool testing_skip_ownership_transfer = false;
};

class Engine {
 public:
  class Snapshot;

  explicit Engine(AddressSpace space = AddressSpace(),
                  EngineOptions options = {});

  const AddressSpace& space() const { return state_.atoms.space(); }

  // --- nodes and links -----------------------------------------------------

  // Returns the id of `name`, registering it if new. "DROP" is `kDropNode`.
  NodeId InternNode(absl::string_view name);
  std::optional<NodeId> FindNode(absl::string_view name) const;
  const std::string& NodeName(NodeId node) const { return node_names_[node]; }
  size_t node_count() const { return node_names_.size(); }

  std::optional<LinkId> FindLink(const Link& link) const;
  const Link& link(LinkId id) const { return links_[id]; }
  size_t link_count() const { return links_.size(); }
  absl::Span<const LinkId> OutLinks(NodeId node) const {
    return out_links_[node];
  }

  // --- rules ---------------------------------------------------------------

  // Installs `rule` and returns the resulting label changes.
  //
  // Rules at one node that overlap and share a priority are ordered by rule
  // id, larger id first; such an insertion sets `priority_conflict` in the
  // result.
  absl::StatusOr<DeltaGraph> InsertRule(const Rule& rule);

  // Uninstalls rule `id` and returns the resulting label changes.
  absl::StatusOr<DeltaGraph> RemoveRule(RuleId id);

  std::optional<Rule> FindRule(RuleId id) const;
  size_t rule_count() const { return state_.rules.size(); }
  // Sizes the rule table for `rules` installed rules.
  void ReserveRules(size_t rules) { state_.rules.reserve(rules); }
  // Ids of rules whose link is `link`, ascending. Scans all rules.
  std::vector<RuleId> RulesOnLink(LinkId link) const;

  // --- queries -------------------------------------------------------------

  const LabelSet& label(LinkId link) const { return state_.labels[link]; }
  // Label of `link`; empty if no rule ever used it. Unknown nodes are a
  // NotFound error.
  absl::StatusOr<LabelSet> LabelOf(const Link& link) const;

  // The link of the rule owning `atom` at `node`, if any.
  std::optional<LinkId> OwningLink(AtomId atom, NodeId node) const;
  // Ids of the rules at `node` covering `atom`, highest priority first.
  std::vector<RuleId> OwnersAt(AtomId atom, NodeId node) const;

  const AtomMap& atoms() const { return state_.atoms; }
  // All atoms currently in the map, as a label.
  LabelSet AllAtoms() const { return LabelSet::FirstN(atoms().next_id()); }

  // Approximate heap footprint of labels, owner tables and the atom map.
  size_t MemoryEstimateBytes() const;

  // --- state management ----------------------------------------------------

  Snapshot Checkpoint() const;
  // Returns rules, owner tables, labels and atom map to `snapshot`. Nodes and
  // links registered since stay registered, with empty labels.
  void Restore(const Snapshot& snapshot);

  // Verifies, by a full sweep, that owner tables match the installed rules
  // and that every node forwards each owned atom along exactly one link.
  absl::Status CheckCoherence() const;

  // One line per link with a non-empty label, sorted by node names:
  // "<src> <dst> [lo:hi) ...". With `coalesce`, adjacent atom intervals are
  // merged so the output depends only on the concrete address sets.
  std::string DumpState(bool coalesce = false) const;

  // Per address range, the ordered owner list at every node. Adjacent ranges
  // with identical owner lists are merged.
  std::string DumpOwners() const;

 private:
  struct RuleRef {
    Priority priority;
    RuleId id;
    LinkId link;
  };
  // Highest (priority, id) first.
  struct RuleRefOrder {
    bool operator()(const RuleRef& a, const RuleRef& b) const {
      if (a.priority != b.priority) return a.priority > b.priority;
      return a.id > b.id;
    }
  };
  // Rules of one node covering one atom, highest first. Usually one or two
  // entries, so a sorted inline vector beats a tree here.
  class RuleSet {
   public:
    using const_iterator = absl::InlinedVector<RuleRef, 2>::const_iterator;

    const_iterator begin() const { return refs_.begin(); }
    const_iterator end() const { return refs_.end(); }
    bool empty() const { return refs_.empty(); }
    size_t size() const { return refs_.size(); }

    const_iterator lower_bound(const RuleRef& r) const {
      return std::lower_bound(refs_.begin(), refs_.end(), r, RuleRefOrder());
    }
    bool contains(const RuleRef& r) const {
      const_iterator it = lower_bound(r);
      return it != end() && it->id == r.id;
    }
    void insert(const RuleRef& r) {
      auto it = std::lower_bound(refs_.begin(), refs_.end(), r, RuleRefOrder());
      if (it == refs_.end() || it->id != r.id) refs_.insert(it, r);
    }
    void erase(const RuleRef& r) {
      auto it = std::lower_bound(refs_.begin(), refs_.end(), r, RuleRefOrder());
      if (it != refs_.end() && it->id == r.id) refs_.erase(it);
    }

   private:
    absl::InlinedVector<RuleRef, 2> refs_;
  };
  using OwnerSlot = absl::flat_hash_map<NodeId, RuleSet>;

  // The match is kept as the atoms keyed by its bounds, which are stable.
  struct InstalledRule {
    LinkId link;
    Priority priority;
    AtomId lo;
    AtomId hi;
  };

  struct State {
    explicit State(AddressSpace space) : atoms(space) {}

    AtomMap atoms;
    std::vector<OwnerSlot> owner;  // by atom
    std::vector<LabelSet> labels;  // by link
    absl::flat_hash_map<RuleId, InstalledRule> rules;
  };

  class DeltaBuilder;

  LinkId InternLink(const Link& link);
  Interval MatchOf(const InstalledRule& r) const {
    return Interval{state_.atoms.KeyOf(r.lo), state_.atoms.KeyOf(r.hi)};
  }
  absl::Status ValidateRule(const Rule& rule) const;

  EngineOptions options_;
  std::vector<std::string> node_names_;
  absl::flat_hash_map<std::string, NodeId> node_ids_;
  std::vector<Link> links_;
  absl::flat_hash_map<Link, LinkId> link_ids_;
  std::vector<std::vector<LinkId>> out_links_;
  State state_;
};

class Engine::Snapshot {
 public:
  Snapshot(const Snapshot&) = default;
  Snapshot& operator=(const Snapshot&) = default;
  Snapshot(Snapshot&&) = default;
  Snapshot& operator=(Snapshot&&) = default;

 private:
  friend class Engine;
  explicit Snapshot(State state) : state_(std::move(state)) {}

  State state_;
};

}  // namespace deltanet

#endif  // DELTANET_ENGINE_H_
