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

#include "deltanet/analysis.h"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace deltanet {
namespace {

// Rotates an elementary cycle (without the repeated endpoint) so that its
// smallest node leads.
std::vector<NodeId> CanonicalRotation(std::vector<NodeId> cycle) {
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());
  return cycle;
}

struct Frame {
  NodeId node;
  std::vector<AtomId> atoms;
  size_t next_link = 0;
};

// Searches for every cycle that starts with `seed` and carries some of
// `seed_atoms`, merging results into `found`.
void SearchCyclesThrough(const Engine& engine, LinkId seed,
                         std::vector<AtomId> seed_atoms,
                         std::vector<char>& on_path,
                         std::map<std::vector<NodeId>, LabelSet>& found) {
  const Link& first = engine.link(seed);
  const NodeId origin = first.source;
  if (first.target == kDropNode) return;

  std::vector<NodeId> path = {origin, first.target};
  on_path[origin] = 1;
  on_path[first.target] = 1;
  std::vector<Frame> stack;
  stack.push_back(Frame{first.target, std::move(seed_atoms)});

  while (!stack.empty()) {
    Frame& top = stack.back();
    absl::Span<const LinkId> out = engine.OutLinks(top.node);
    if (top.next_link >= out.size()) {
      on_path[top.node] = 0;
      path.pop_back();
      stack.pop_back();
      continue;
    }
    const LinkId l = out[top.next_link++];
    const LabelSet& label = engine.label(l);
    std::vector<AtomId> carried;
    for (AtomId a : top.atoms) {
      if (label.Test(a)) carried.push_back(a);
    }
    if (carried.empty()) continue;
    const NodeId next = engine.link(l).target;
    if (next == origin) {
      LabelSet& atoms = found[CanonicalRotation(path)];
      for (AtomId a : carried) atoms.Set(a);
      continue;
    }
    // Revisiting any other node closes a cycle that avoids the seed link.
    if (on_path[next] || next == kDropNode) continue;
    on_path[next] = 1;
    path.push_back(next);
    stack.push_back(Frame{next, std::move(carried)});
  }
  on_path[origin] = 0;
}

struct Walk {
  enum class End { kStopped, kDropped, kLoop };
  End end;
  NodeId terminal;
  std::vector<NodeId> path;
};

// Follows `atom` from `start` through the owning links of the current state.
Walk FollowAtom(const Engine& engine, AtomId atom, NodeId start) {
  Walk walk{Walk::End::kStopped, start, {start}};
  std::vector<char> seen(engine.node_count(), 0);
  seen[start] = 1;
  NodeId at = start;
  while (true) {
    if (at == kDropNode) {
      walk.end = Walk::End::kDropped;
      walk.terminal = at;
      return walk;
    }
    std::optional<LinkId> l = engine.OwningLink(atom, at);
    if (!l.has_value()) {
      walk.end = Walk::End::kStopped;
      walk.terminal = at;
      return walk;
    }
    const NodeId next = engine.link(*l).target;
    walk.path.push_back(next);
    if (seen[next]) {
      walk.end = Walk::End::kLoop;
      walk.terminal = next;
      return walk;
    }
    seen[next] = 1;
    at = next;
  }
}

}  // namespace

std::vector<Interval> IntervalsOf(const AtomMap& map, const LabelSet& atoms,
                                  bool coalesce) {
  std::vector<Interval> out;
  atoms.ForEach([&](AtomId a) {
    absl::StatusOr<Interval> iv = map.IntervalOf(a);
    if (iv.ok()) out.push_back(*iv);
  });
  std::sort(out.begin(), out.end());
  if (!coalesce) return out;
  std::vector<Interval> merged;
  for (const Interval& iv : out) {
    if (!merged.empty() && merged.back().hi == iv.lo) {
      merged.back().hi = iv.hi;
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::vector<LoopReport> CheckLoops(const Engine& engine,
                                   const DeltaGraph& delta) {
  std::map<std::vector<NodeId>, LabelSet> found;
  std::vector<char> on_path(engine.node_count(), 0);
  for (const LinkDelta& change : delta.links) {
    if (change.added.empty()) continue;
    const LabelSet& label = engine.label(change.link);
    std::vector<AtomId> atoms;
    for (AtomId a : change.added) {
      if (label.Test(a)) atoms.push_back(a);
    }
    if (atoms.empty()) continue;
    SearchCyclesThrough(engine, change.link, std::move(atoms), on_path, found);
  }
  std::vector<LoopReport> reports;
  reports.reserve(found.size());
  for (auto& [cycle, atoms] : found) {
    LoopReport r;
    r.cycle = cycle;
    r.cycle.push_back(cycle.front());
    r.witness = IntervalsOf(engine.atoms(), atoms);
    r.atoms = std::move(atoms);
    reports.push_back(std::move(r));
  }
  return reports;
}

absl::StatusOr<LabelSet> ReachableAtoms(const Engine& engine, NodeId src,
                                        NodeId dst) {
  if (src >= engine.node_count() || dst >= engine.node_count()) {
    return absl::NotFoundError("unknown node");
  }
  if (src == dst) return engine.AllAtoms();
  std::vector<LabelSet> reach(engine.node_count());
  std::vector<char> queued(engine.node_count(), 0);
  reach[src] = engine.AllAtoms();
  std::deque<NodeId> work = {src};
  queued[src] = 1;
  while (!work.empty()) {
    const NodeId at = work.front();
    work.pop_front();
    queued[at] = 0;
    for (LinkId l : engine.OutLinks(at)) {
      const NodeId next = engine.link(l).target;
      if (next == src) continue;
      LabelSet gain = reach[at] & engine.label(l);
      gain.Subtract(reach[next]);
      if (gain.Empty()) continue;
      reach[next] |= gain;
      if (!queued[next]) {
        queued[next] = 1;
        work.push_back(next);
      }
    }
  }
  return reach[dst];
}

ClosureMatrix AllPairsClosure(const Engine& engine) {
  const size_t n = engine.node_count();
  ClosureMatrix closure(n);
  for (LinkId l = 0; l < engine.link_count(); ++l) {
    const Link& link = engine.link(l);
    closure.at(link.source, link.target) |= engine.label(l);
  }
  for (NodeId k = 0; k < n; ++k) {
    for (NodeId i = 0; i < n; ++i) {
      const LabelSet& via = closure.at(i, k);
      if (via.Empty()) continue;
      for (NodeId j = 0; j < n; ++j) {
        closure.at(i, j).UniteWithIntersection(via, closure.at(k, j));
      }
    }
  }
  return closure;
}

absl::string_view VerdictName(FailureVerdict verdict) {
  switch (verdict) {
    case FailureVerdict::kRerouted:
      return "rerouted";
    case FailureVerdict::kBlackholed:
      return "blackholed";
    case FailureVerdict::kLooping:
      return "looping";
  }
  return "unknown";
}

bool FailureReport::HasViolations() const {
  if (!loops.empty()) return true;
  return std::any_of(outcomes.begin(), outcomes.end(),
                     [this](const FailureOutcome& o) {
                       if (o.verdict == FailureVerdict::kLooping) return true;
                       return check == FailureCheck::kBlackholes &&
                              o.verdict == FailureVerdict::kBlackholed;
                     });
}

FailureReport ReportAffectedFlows(const Engine& engine,
                                  absl::Span<const LinkId> links) {
  FailureReport report;
  report.failed.assign(links.begin(), links.end());
  for (LinkId l : links) report.affected |= engine.label(l);
  if (report.affected.Empty()) return report;
  for (LinkId l = 0; l < engine.link_count(); ++l) {
    const LabelSet& label = engine.label(l);
    if (!label.Intersects(report.affected)) continue;
    report.flows.push_back(AffectedFlow{l, label & report.affected});
  }
  return report;
}

absl::StatusOr<FailureReport> WhatIfFailLinks(Engine& engine,
                                              absl::Span<const Link> links,
                                              FailureCheck check) {
  std::vector<LinkId> ids;
  for (const Link& link : links) {
    std::optional<LinkId> id = engine.FindLink(link);
    if (!id.has_value()) {
      return absl::NotFoundError(absl::StrCat(
          "unknown link ",
          link.source < engine.node_count() ? engine.NodeName(link.source)
                                            : "?",
          "->",
          link.target < engine.node_count() ? engine.NodeName(link.target)
                                            : "?"));
    }
    if (std::find(ids.begin(), ids.end(), *id) == ids.end()) ids.push_back(*id);
  }
  FailureReport report = ReportAffectedFlows(engine, ids);
  report.check = check;
  if (check == FailureCheck::kReportOnly || report.affected.Empty()) {
    return report;
  }

  // Fate of each (start, atom) before the failure.
  struct Probe {
    NodeId start;
    AtomId atom;
    Walk before;
  };
  std::vector<Probe> probes;
  for (LinkId l : ids) {
    const NodeId start = engine.link(l).source;
    engine.label(l).ForEach([&](AtomId a) {
      probes.push_back(Probe{start, a, FollowAtom(engine, a, start)});
    });
  }

  std::vector<Rule> removed;
  for (LinkId l : ids) {
    for (RuleId id : engine.RulesOnLink(l)) removed.push_back(*engine.FindRule(id));
  }
  DeltaGraph failure;
  for (const Rule& rule : removed) {
    absl::StatusOr<DeltaGraph> d = engine.RemoveRule(rule.id);
    if (!d.ok()) return d.status();
    failure.Merge(*d);
  }

  std::map<std::tuple<FailureVerdict, NodeId, std::vector<NodeId>>, LabelSet>
      classes;
  for (const Probe& probe : probes) {
    Walk after = FollowAtom(engine, probe.atom, probe.start);
    FailureVerdict verdict;
    if (after.end == Walk::End::kLoop) {
      verdict = FailureVerdict::kLooping;
    } else if (after.end == probe.before.end &&
               after.terminal == probe.before.terminal) {
      verdict = FailureVerdict::kRerouted;
    } else {
      verdict = FailureVerdict::kBlackholed;
    }
    classes[{verdict, probe.start, std::move(after.path)}].Set(probe.atom);
  }
  for (auto& [key, atoms] : classes) {
    report.outcomes.push_back(FailureOutcome{std::get<0>(key), std::get<1>(key),
                                             std::move(atoms),
                                             std::get<2>(key)});
  }
  if (check == FailureCheck::kLoops) report.loops = CheckLoops(engine, failure);

  // Reinstalling the same rules over the same atom map restores labels and
  // owner tables exactly; no bound is new, so no atom is created.
  for (const Rule& rule : removed) {
    absl::StatusOr<DeltaGraph> d = engine.InsertRule(rule);
    if (!d.ok()) return d.status();
  }
  return report;
}

}  // namespace deltanet
