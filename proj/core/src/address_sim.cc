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

#include "deltanet/address_sim.h"

#include <algorithm>
#include <utility>

#include "absl/container/btree_set.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "deltanet/analysis.h"

namespace deltanet {

AddressSim::AddressSim(AddressSpace space) : space_(space) {
  Intern(kDropNodeName);
}

int AddressSim::Intern(absl::string_view name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  rules_.emplace_back();
  if (has_table()) table_.emplace_back(size_t{1} << space_.bits());
  return id;
}

std::optional<int> AddressSim::FindNode(absl::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

AddressSim::Best AddressSim::Scan(int node, const Address& addr) const {
  Best best;
  for (const SimRule& r : rules_[node]) {
    if (r.match.Contains(addr) && Beats(r, best)) {
      best = Best{r.target, r.priority, r.id};
    }
  }
  return best;
}

int AddressSim::NextHop(int node, const Address& addr) const {
  return Scan(node, addr).target;
}

absl::StatusOr<std::vector<AddressSim::Change>> AddressSim::Apply(
    const TraceOp& op) {
  std::vector<Change> changes;
  if (op.kind == TraceOp::Kind::kAdd) {
    if (where_.contains(op.id)) {
      return absl::AlreadyExistsError(absl::StrCat("duplicate rule id ", op.id));
    }
    if (op.source == kDropNodeName || op.source == op.target) {
      return absl::InvalidArgumentError("bad rule link");
    }
    absl::StatusOr<Interval> match = PrefixToInterval(op.prefix, space_);
    if (!match.ok()) return match.status();
    const int source = Intern(op.source);
    const int target = Intern(op.target);
    const SimRule rule{op.id, target, op.priority, *match, op.prefix};
    rules_[source].push_back(rule);
    where_.emplace(op.id, source);
    if (has_table()) {
      const uint64_t hi = match->hi.ToUint64();
      for (uint64_t a = match->lo.ToUint64(); a < hi; ++a) {
        Best& best = table_[source][a];
        if (!Beats(rule, best)) continue;
        if (best.target != target) changes.push_back({source, a});
        best = Best{target, rule.priority, rule.id};
      }
    }
    return changes;
  }
  auto it = where_.find(op.id);
  if (it == where_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown rule id ", op.id));
  }
  const int source = it->second;
  where_.erase(it);
  std::vector<SimRule>& rules = rules_[source];
  auto pos = std::find_if(rules.begin(), rules.end(),
                          [&](const SimRule& r) { return r.id == op.id; });
  const Interval match = pos->match;
  rules.erase(pos);
  if (has_table()) {
    const uint64_t hi = match.hi.ToUint64();
    for (uint64_t a = match.lo.ToUint64(); a < hi; ++a) {
      Best& best = table_[source][a];
      if (best.target == kNoHop || best.id != op.id) continue;
      const Best next = Scan(source, Address(a));
      if (next.target != best.target) changes.push_back({source, a});
      best = next;
    }
  }
  return changes;
}

AddressSim::Walk AddressSim::Forward(int node, const Address& addr) const {
  Walk walk;
  std::vector<char> seen(names_.size(), 0);
  int at = node;
  while (true) {
    walk.path.push_back(at);
    if (at == 0) {
      walk.end = End::kDropped;
      return walk;
    }
    if (seen[at]) {
      walk.end = End::kLoop;
      return walk;
    }
    seen[at] = 1;
    const int next = NextHop(at, addr);
    if (next == kNoHop) {
      walk.end = End::kNoRule;
      return walk;
    }
    at = next;
  }
}

std::vector<int> AddressSim::NextHops(const Address& addr) const {
  std::vector<int> out(names_.size(), kNoHop);
  for (size_t n = 1; n < names_.size(); ++n) {
    out[n] = NextHop(static_cast<int>(n), addr);
  }
  return out;
}

std::optional<std::vector<int>> AddressSim::LoopThrough(
    int node, const Address& addr) const {
  std::vector<int> cycle = {node};
  int at = node;
  for (size_t hops = 0; hops < names_.size(); ++hops) {
    at = has_table() ? CachedNextHop(at, addr.ToUint64()) : NextHop(at, addr);
    if (at == kNoHop || at == 0) return std::nullopt;
    if (at == node) return cycle;
    cycle.push_back(at);
  }
  return std::nullopt;
}

std::string AddressSim::RulesCovering(int node, const Address& addr) const {
  std::vector<const SimRule*> hits;
  for (const SimRule& r : rules_[node]) {
    if (r.match.Contains(addr)) hits.push_back(&r);
  }
  std::sort(hits.begin(), hits.end(),
            [](const SimRule* a, const SimRule* b) { return a->id < b->id; });
  std::string out;
  for (const SimRule* r : hits) {
    absl::StrAppend(&out,
                    FormatTraceOp(TraceOp::Add(r->id, names_[node],
                                               names_[r->target], r->priority,
                                               r->prefix),
                                  space_),
                    "\n");
  }
  return out;
}

std::vector<Address> AddressSim::Bounds() const {
  absl::btree_set<Address> bounds = {space_.min()};
  for (const auto& rules : rules_) {
    for (const SimRule& r : rules) {
      bounds.insert(r.match.lo);
      bounds.insert(r.match.hi);
    }
  }
  return std::vector<Address>(bounds.begin(), bounds.end());
}

std::string Counterexample::ToString() const {
  return absl::StrCat("mismatch at node ", node, " address ",
                      address.ToString(), ": expected ", expected, ", got ",
                      got, "\n", trace);
}

namespace {

std::string EngineHop(const Engine& engine, absl::string_view name,
                      const Address& addr) {
  std::optional<NodeId> node = engine.FindNode(name);
  if (!node.has_value()) return "none";
  const AtomId atom = engine.atoms().AtomContaining(addr);
  std::vector<std::string> targets;
  for (LinkId l : engine.OutLinks(*node)) {
    if (engine.label(l).Test(atom)) {
      targets.push_back(engine.NodeName(engine.link(l).target));
    }
  }
  if (targets.empty()) return "none";
  return absl::StrJoin(targets, "+");
}

std::string SimHop(const AddressSim& sim, absl::string_view name,
                   const Address& addr) {
  std::optional<int> node = sim.FindNode(name);
  if (!node.has_value()) return "none";
  const int hop = sim.NextHop(*node, addr);
  return hop == AddressSim::kNoHop ? "none" : sim.node_name(hop);
}

std::optional<Counterexample> CompareAt(const AddressSim& sim,
                                        const Engine& engine,
                                        absl::string_view name,
                                        const Address& addr) {
  std::optional<int> sim_node = sim.FindNode(name);
  int hop = AddressSim::kNoHop;
  if (sim_node.has_value()) {
    hop = sim.has_table() ? sim.CachedNextHop(*sim_node, addr.ToUint64())
                          : sim.NextHop(*sim_node, addr);
  }
  // Fast path without building strings.
  std::optional<NodeId> node = engine.FindNode(name);
  int carried = 0;
  const std::string* target = nullptr;
  if (node.has_value()) {
    const AtomId atom = engine.atoms().AtomContaining(addr);
    for (LinkId l : engine.OutLinks(*node)) {
      if (engine.label(l).Test(atom)) {
        ++carried;
        target = &engine.NodeName(engine.link(l).target);
      }
    }
  }
  if (carried == 0 && hop == AddressSim::kNoHop) return std::nullopt;
  if (carried == 1 && hop != AddressSim::kNoHop &&
      *target == sim.node_name(hop)) {
    return std::nullopt;
  }
  Counterexample cx{std::string(name), addr, SimHop(sim, name, addr),
                    EngineHop(engine, name, addr), ""};
  if (sim_node.has_value()) cx.trace = sim.RulesCovering(*sim_node, addr);
  return cx;
}

std::vector<std::string> NodeNames(const AddressSim& sim,
                                   const Engine& engine) {
  std::vector<std::string> names;
  for (size_t n = 1; n < sim.node_count(); ++n) {
    names.push_back(sim.node_name(static_cast<int>(n)));
  }
  for (NodeId n = 1; n < engine.node_count(); ++n) {
    if (!sim.FindNode(engine.NodeName(n)).has_value()) {
      names.push_back(engine.NodeName(n));
    }
  }
  return names;
}

}  // namespace

std::optional<Counterexample> CompareWithEngine(const AddressSim& sim,
                                                const Engine& engine) {
  const std::vector<std::string> names = NodeNames(sim, engine);
  if (sim.has_table()) {
    const uint64_t size = uint64_t{1} << sim.space().bits();
    for (const std::string& name : names) {
      for (uint64_t a = 0; a < size; ++a) {
        if (auto cx = CompareAt(sim, engine, name, Address(a))) return cx;
      }
    }
    return std::nullopt;
  }
  absl::btree_set<Address> probes;
  for (const Address& b : sim.Bounds()) probes.insert(b);
  for (const Interval& iv :
       IntervalsOf(engine.atoms(), engine.AllAtoms(), false)) {
    probes.insert(iv.lo);
  }
  probes.erase(sim.space().max());
  for (const std::string& name : names) {
    for (const Address& a : probes) {
      if (auto cx = CompareAt(sim, engine, name, a)) return cx;
    }
  }
  return std::nullopt;
}

std::optional<Counterexample> CompareWithEngine(const AddressSim& sim,
                                                const Engine& engine,
                                                absl::string_view node,
                                                const Interval& range) {
  for (Address a = range.lo; a < range.hi; ++a) {
    if (auto cx = CompareAt(sim, engine, node, a)) return cx;
  }
  return std::nullopt;
}

}  // namespace deltanet
