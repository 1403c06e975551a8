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

#include "deltanet/engine.h"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/container/btree_map.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"

namespace deltanet {
namespace {

void SetDifference(const AtomList& a, const AtomList& b, AtomList& out) {
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
}

AtomList SortedUnion(AtomList a, const AtomList& b) {
  AtomList out;
  std::sort(a.begin(), a.end());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

}  // namespace

void DeltaGraph::Merge(const DeltaGraph& later) {
  std::map<LinkId, std::pair<const LinkDelta*, const LinkDelta*>> by_link;
  for (const LinkDelta& d : links) by_link[d.link].first = &d;
  for (const LinkDelta& d : later.links) by_link[d.link].second = &d;

  static const LinkDelta kNone;
  std::vector<LinkDelta> merged;
  for (const auto& [id, pair] : by_link) {
    const LinkDelta& first = pair.first ? *pair.first : kNone;
    const LinkDelta& second = pair.second ? *pair.second : kNone;
    LinkDelta out{id, {}, {}};
    AtomList tmp;
    SetDifference(first.added, second.removed, tmp);
    SetDifference(second.added, first.removed, out.added);
    out.added = SortedUnion(std::move(tmp), out.added);
    tmp.clear();
    AtomList rest;
    SetDifference(first.removed, second.added, tmp);
    SetDifference(second.removed, first.added, rest);
    out.removed = SortedUnion(std::move(tmp), rest);
    if (!out.added.empty() || !out.removed.empty()) {
      merged.push_back(std::move(out));
    }
  }
  links = std::move(merged);
  splits.insert(splits.end(), later.splits.begin(), later.splits.end());
  atoms_touched += later.atoms_touched;
  priority_conflict = priority_conflict || later.priority_conflict;
}

// Collects label changes of a single operation. Each (link, atom) pair is
// touched at most once per operation, so no cancellation is needed here.
class Engine::DeltaBuilder {
 public:
  void Added(LinkId link, AtomId atom) { For(link).added.push_back(atom); }
  void Removed(LinkId link, AtomId atom) { For(link).removed.push_back(atom); }

  DeltaGraph Finish(DeltaPairs splits, size_t atoms_touched, bool conflict) {
    DeltaGraph delta;
    for (LinkDelta& change : changes_) {
      std::sort(change.added.begin(), change.added.end());
      std::sort(change.removed.begin(), change.removed.end());
    }
    std::sort(changes_.begin(), changes_.end(),
              [](const LinkDelta& a, const LinkDelta& b) {
                return a.link < b.link;
              });
    delta.links.assign(std::make_move_iterator(changes_.begin()),
                       std::make_move_iterator(changes_.end()));
    delta.splits = std::move(splits);
    delta.atoms_touched = atoms_touched;
    delta.priority_conflict = conflict;
    return delta;
  }

 private:
  // All changes of one operation sit at one source node, so only a few
  // links are involved.
  LinkDelta& For(LinkId link) {
    for (LinkDelta& change : changes_) {
      if (change.link == link) return change;
    }
    changes_.push_back(LinkDelta{link, {}, {}});
    return changes_.back();
  }

  absl::InlinedVector<LinkDelta, 2> changes_;
};

Engine::Engine(AddressSpace space, EngineOptions options)
    : options_(options), state_(space) {
  InternNode(kDropNodeName);
  state_.owner.resize(state_.atoms.next_id());
}

NodeId Engine::InternNode(absl::string_view name) {
  auto it = node_ids_.find(name);
  if (it != node_ids_.end()) return it->second;
  const NodeId id = static_cast<NodeId>(node_names_.size());
  node_names_.emplace_back(name);
  node_ids_.emplace(std::string(name), id);
  out_links_.emplace_back();
  return id;
}

std::optional<NodeId> Engine::FindNode(absl::string_view name) const {
  auto it = node_ids_.find(name);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<LinkId> Engine::FindLink(const Link& link) const {
  auto it = link_ids_.find(link);
  if (it == link_ids_.end()) return std::nullopt;
  return it->second;
}

LinkId Engine::InternLink(const Link& link) {
  auto [it, inserted] =
      link_ids_.try_emplace(link, static_cast<LinkId>(links_.size()));
  if (inserted) {
    links_.push_back(link);
    out_links_[link.source].push_back(it->second);
    state_.labels.emplace_back();
  }
  return it->second;
}

absl::Status Engine::ValidateRule(const Rule& rule) const {
  if (state_.rules.contains(rule.id)) {
    return absl::AlreadyExistsError(
        absl::StrCat("duplicate rule id ", rule.id));
  }
  if (!rule.match.IsValidIn(space())) {
    return absl::InvalidArgumentError(
        absl::StrCat("rule ", rule.id, ": match ", rule.match.ToString(),
                     " is not a non-empty interval of the address space"));
  }
  if (rule.link.source >= node_count() || rule.link.target >= node_count()) {
    return absl::NotFoundError(
        absl::StrCat("rule ", rule.id, ": unknown node"));
  }
  if (rule.link.source == kDropNode) {
    return absl::InvalidArgumentError(
        absl::StrCat("rule ", rule.id, ": DROP has no outgoing links"));
  }
  if (rule.link.source == rule.link.target) {
    return absl::InvalidArgumentError(
        absl::StrCat("rule ", rule.id, ": self-loop link"));
  }
  return absl::OkStatus();
}

absl::StatusOr<DeltaGraph> Engine::InsertRule(const Rule& rule) {
  if (absl::Status s = ValidateRule(rule); !s.ok()) return s;
  const LinkId link = InternLink(rule.link);
  const NodeId source = rule.link.source;
  State& st = state_;

  AtomId lo_atom = 0, hi_atom = 0;
  DeltaPairs splits = st.atoms.CreateAtomsPlus(rule.match, &lo_atom, &hi_atom);
  st.owner.resize(st.atoms.next_id());
  for (const DeltaPair& split : splits) {
    // The new atom is forwarded exactly like the atom it was cut from.
    st.owner[split.new_atom] = st.owner[split.old_atom];
    for (const auto& [node, rules] : st.owner[split.new_atom]) {
      st.labels[rules.begin()->link].Set(split.new_atom);
    }
  }

  const RuleRef ref{rule.priority, rule.id, link};
  const RuleRefOrder outranks;
  DeltaBuilder delta;
  size_t touched = 0;
  bool conflict = false;
  absl::Status s = st.atoms.ForEachAtom(rule.match, [&](AtomId atom) {
    ++touched;
    RuleSet& rules = st.owner[atom][source];
    if (!rules.empty()) {
      const RuleRef& current = *rules.begin();
      auto same = rules.lower_bound(
          RuleRef{rule.priority, std::numeric_limits<RuleId>::max(), 0});
      if (same != rules.end() && same->priority == rule.priority) {
        conflict = true;
      }
      if (outranks(ref, current) && current.link != link) {
        st.labels[link].Set(atom);
        st.labels[current.link].Reset(atom);
        delta.Added(link, atom);
        delta.Removed(current.link, atom);
      }
    } else {
      st.labels[link].Set(atom);
      delta.Added(link, atom);
    }
    rules.insert(ref);
  });
  if (!s.ok()) return s;  // Unreachable: the bounds were just registered.

  st.rules.emplace(rule.id,
                   InstalledRule{link, rule.priority, lo_atom, hi_atom});
  return delta.Finish(std::move(splits), touched, conflict);
}

absl::StatusOr<DeltaGraph> Engine::RemoveRule(RuleId id) {
  State& st = state_;
  auto it = st.rules.find(id);
  if (it == st.rules.end()) {
    return absl::NotFoundError(absl::StrCat("unknown rule id ", id));
  }
  const InstalledRule rule = it->second;
  const LinkId link = rule.link;
  const NodeId source = links_[link].source;
  const RuleRef ref{rule.priority, id, link};

  DeltaBuilder delta;
  size_t touched = 0;
  absl::Status s = st.atoms.ForEachAtom(MatchOf(rule), [&](AtomId atom) {
    ++touched;
    OwnerSlot& slot = st.owner[atom];
    auto rules_it = slot.find(source);
    RuleSet& rules = rules_it->second;
    const bool was_owner = rules.begin()->id == id;
    rules.erase(ref);
    if (was_owner) {
      const RuleRef* next = rules.empty() ? nullptr : &*rules.begin();
      if (next == nullptr || next->link != link ||
          options_.testing_skip_ownership_transfer) {
        st.labels[link].Reset(atom);
        delta.Removed(link, atom);
        if (next != nullptr && !options_.testing_skip_ownership_transfer) {
          st.labels[next->link].Set(atom);
          delta.Added(next->link, atom);
        }
      }
    }
    if (rules.empty()) slot.erase(rules_it);
  });
  if (!s.ok()) return s;

  st.rules.erase(it);
  return delta.Finish({}, touched, false);
}

std::optional<Rule> Engine::FindRule(RuleId id) const {
  auto it = state_.rules.find(id);
  if (it == state_.rules.end()) return std::nullopt;
  const InstalledRule& r = it->second;
  return Rule{id, links_[r.link], r.priority, MatchOf(r)};
}

std::vector<RuleId> Engine::RulesOnLink(LinkId link) const {
  std::vector<RuleId> ids;
  for (const auto& [id, rule] : state_.rules) {
    if (rule.link == link) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

absl::StatusOr<LabelSet> Engine::LabelOf(const Link& link) const {
  if (link.source >= node_count() || link.target >= node_count()) {
    return absl::NotFoundError("unknown link: node not registered");
  }
  std::optional<LinkId> id = FindLink(link);
  if (!id.has_value()) return LabelSet();
  return state_.labels[*id];
}

std::optional<LinkId> Engine::OwningLink(AtomId atom, NodeId node) const {
  if (atom >= state_.owner.size()) return std::nullopt;
  const OwnerSlot& slot = state_.owner[atom];
  auto it = slot.find(node);
  if (it == slot.end() || it->second.empty()) return std::nullopt;
  return it->second.begin()->link;
}

std::vector<RuleId> Engine::OwnersAt(AtomId atom, NodeId node) const {
  std::vector<RuleId> ids;
  if (atom >= state_.owner.size()) return ids;
  auto it = state_.owner[atom].find(node);
  if (it == state_.owner[atom].end()) return ids;
  for (const RuleRef& r : it->second) ids.push_back(r.id);
  return ids;
}

size_t Engine::MemoryEstimateBytes() const {
  size_t bytes = state_.atoms.MemoryBytes();
  for (const LabelSet& label : state_.labels) bytes += label.MemoryBytes();
  bytes += state_.owner.capacity() * sizeof(OwnerSlot);
  for (const OwnerSlot& slot : state_.owner) {
    bytes += slot.capacity() * (sizeof(OwnerSlot::value_type) + 1);
    for (const auto& [node, rules] : slot) {
      bytes += rules.size() * sizeof(RuleRef);
    }
  }
  bytes += state_.rules.capacity() *
           (sizeof(std::pair<RuleId, InstalledRule>) + 1);
  return bytes;
}

Engine::Snapshot Engine::Checkpoint() const { return Snapshot(state_); }

void Engine::Restore(const Snapshot& snapshot) {
  state_ = snapshot.state_;
  state_.labels.resize(links_.size());
}

absl::Status Engine::CheckCoherence() const {
  const State& st = state_;
  size_t expected_entries = 0;
  std::optional<RuleId> missing;
  for (const auto& [id, installed] : st.rules) {
    const NodeId source = links_[installed.link].source;
    const RuleRef ref{installed.priority, id, installed.link};
    absl::Status s = st.atoms.ForEachAtom(MatchOf(installed), [&](AtomId a) {
      ++expected_entries;
      auto it = st.owner[a].find(source);
      if (it == st.owner[a].end() || !it->second.contains(ref)) missing = id;
    });
    if (!s.ok()) return s;
    if (missing.has_value()) {
      return absl::InternalError(
          absl::StrCat("rule ", *missing, " missing from an owner table"));
    }
  }
  size_t entries = 0;
  for (const OwnerSlot& slot : st.owner) {
    for (const auto& [node, rules] : slot) {
      if (rules.empty()) {
        return absl::InternalError("empty owner set left in table");
      }
      entries += rules.size();
    }
  }
  if (entries != expected_entries) {
    return absl::InternalError(
        absl::StrCat("owner tables hold ", entries, " entries, rules imply ",
                     expected_entries));
  }
  for (AtomId a = 0; a < st.atoms.next_id(); ++a) {
    for (NodeId node = 0; node < node_count(); ++node) {
      const std::optional<LinkId> owner = OwningLink(a, node);
      size_t carrying = 0;
      for (LinkId l : out_links_[node]) {
        if (!st.labels[l].Test(a)) continue;
        ++carrying;
        if (!owner.has_value() || *owner != l) {
          return absl::InternalError(absl::StrCat(
              "atom ", a, " on link ", node_names_[node], "->",
              node_names_[links_[l].target], " without owning it"));
        }
      }
      if (owner.has_value() && carrying != 1) {
        return absl::InternalError(absl::StrCat(
            "atom ", a, " owned at ", node_names_[node], " but carried by ",
            carrying, " links"));
      }
    }
  }
  return absl::OkStatus();
}

namespace {

std::string JoinIntervals(std::vector<Interval> intervals, bool coalesce) {
  std::sort(intervals.begin(), intervals.end());
  std::vector<Interval> out;
  for (const Interval& iv : intervals) {
    if (coalesce && !out.empty() && out.back().hi == iv.lo) {
      out.back().hi = iv.hi;
    } else {
      out.push_back(iv);
    }
  }
  return absl::StrJoin(out, " ", [](std::string* s, const Interval& iv) {
    s->append(iv.ToString());
  });
}

}  // namespace

std::string Engine::DumpState(bool coalesce) const {
  std::vector<std::pair<std::pair<std::string, std::string>, LinkId>> order;
  for (LinkId l = 0; l < links_.size(); ++l) {
    if (state_.labels[l].Empty()) continue;
    order.push_back({{node_names_[links_[l].source],
                      node_names_[links_[l].target]},
                     l});
  }
  std::sort(order.begin(), order.end());
  std::string out;
  for (const auto& [names, l] : order) {
    std::vector<Interval> intervals;
    state_.labels[l].ForEach([&](AtomId a) {
      intervals.push_back(*state_.atoms.IntervalOf(a));
    });
    absl::StrAppend(&out, names.first, " ", names.second, " ",
                    JoinIntervals(std::move(intervals), coalesce), "\n");
  }
  return out;
}

std::string Engine::DumpOwners() const {
  std::vector<std::pair<std::string, NodeId>> nodes;
  for (NodeId n = 0; n < node_count(); ++n) nodes.push_back({node_names_[n], n});
  std::sort(nodes.begin(), nodes.end());

  std::string out;
  std::optional<Interval> pending;
  std::string pending_desc;
  auto flush = [&] {
    if (pending.has_value() && !pending_desc.empty()) {
      absl::StrAppend(&out, pending->ToString(), pending_desc, "\n");
    }
  };
  absl::Status s = state_.atoms.ForEachAtom(
      Interval{space().min(), space().max()}, [&](AtomId a) {
        const Interval iv = *state_.atoms.IntervalOf(a);
        std::string desc;
        for (const auto& [name, node] : nodes) {
          std::vector<RuleId> ids = OwnersAt(a, node);
          if (ids.empty()) continue;
          absl::StrAppend(&desc, " ", name, "=", absl::StrJoin(ids, ","));
        }
        if (pending.has_value() && desc == pending_desc &&
            pending->hi == iv.lo) {
          pending->hi = iv.hi;
          return;
        }
        flush();
        pending = iv;
        pending_desc = std::move(desc);
      });
  flush();
  (void)s;
  return out;
}

}  // namespace deltanet
