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

#include "deltanet/trie_baseline.h"

#include <algorithm>

#include "absl/container/btree_set.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace deltanet {
namespace {

// Bit `depth` of the prefix, counting from the most significant.
int BitAt(const IpPrefix& p, int bits, int depth) {
  return p.base.Bit(bits - 1 - depth) ? 1 : 0;
}

bool Better(const TrieBaseline::StoredRule& a,
            const TrieBaseline::StoredRule& b) {
  return a.priority > b.priority || (a.priority == b.priority && a.id > b.id);
}

}  // namespace

TrieBaseline::TrieBaseline(AddressSpace space) : space_(space) {
  trie_.emplace_back();
  Intern(kDropNodeName);
}

int TrieBaseline::Intern(absl::string_view name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const int id = static_cast<int>(names_.size());
  names_.emplace_back(name);
  index_.emplace(std::string(name), id);
  return id;
}

std::optional<int> TrieBaseline::FindNode(absl::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int32_t TrieBaseline::Locate(const IpPrefix& p, bool create) {
  int32_t at = 0;
  for (int d = 0; d < p.length; ++d) {
    const int bit = BitAt(p, space_.bits(), d);
    if (trie_[at].child[bit] < 0) {
      if (!create) return -1;
      trie_[at].child[bit] = static_cast<int32_t>(trie_.size());
      trie_.emplace_back();
    }
    at = trie_[at].child[bit];
  }
  return at;
}

int32_t TrieBaseline::Find(const IpPrefix& p) const {
  return const_cast<TrieBaseline*>(this)->Locate(p, false);
}

absl::Status TrieBaseline::Apply(const TraceOp& op) {
  if (op.kind == TraceOp::Kind::kAdd) {
    if (rules_.contains(op.id)) {
      return absl::AlreadyExistsError(absl::StrCat("duplicate rule id ", op.id));
    }
    absl::StatusOr<Interval> match = PrefixToInterval(op.prefix, space_);
    if (!match.ok()) return match.status();
    const StoredRule rule{op.id,       Intern(op.source), Intern(op.target),
                          op.priority, op.prefix,         *match};
    trie_[Locate(op.prefix, true)].rules.push_back(op.id);
    by_link_[{rule.source, rule.target}].insert(op.id);
    rules_.emplace(op.id, rule);
    return absl::OkStatus();
  }
  auto it = rules_.find(op.id);
  if (it == rules_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown rule id ", op.id));
  }
  const StoredRule& rule = it->second;
  std::vector<RuleId>& at = trie_[Locate(rule.prefix, false)].rules;
  at.erase(std::find(at.begin(), at.end(), op.id));
  auto link = by_link_.find({rule.source, rule.target});
  link->second.erase(op.id);
  if (link->second.empty()) by_link_.erase(link);
  rules_.erase(it);
  return absl::OkStatus();
}

absl::StatusOr<std::vector<TrieBaseline::EquivalenceClass>>
TrieBaseline::ApplyAndCheck(const TraceOp& op) {
  IpPrefix prefix = op.prefix;
  if (op.kind == TraceOp::Kind::kDel) {
    auto it = rules_.find(op.id);
    if (it == rules_.end()) {
      return absl::NotFoundError(absl::StrCat("unknown rule id ", op.id));
    }
    prefix = it->second.prefix;
  }
  if (absl::Status s = Apply(op); !s.ok()) return s;
  return AffectedEcs(prefix);
}

std::vector<const TrieBaseline::StoredRule*> TrieBaseline::Overlapping(
    const IpPrefix& p) const {
  std::vector<const StoredRule*> out;
  auto take = [&](int32_t node) {
    for (RuleId id : trie_[node].rules) out.push_back(&rules_.at(id));
  };
  int32_t at = 0;
  for (int d = 0; d < p.length; ++d) {
    take(at);
    at = trie_[at].child[BitAt(p, space_.bits(), d)];
    if (at < 0) return out;
  }
  std::vector<int32_t> stack = {at};
  while (!stack.empty()) {
    const int32_t node = stack.back();
    stack.pop_back();
    take(node);
    for (int32_t c : trie_[node].child) {
      if (c >= 0) stack.push_back(c);
    }
  }
  return out;
}

std::vector<TrieBaseline::EquivalenceClass> TrieBaseline::Classify(
    const Interval& range, absl::Span<const StoredRule* const> rules) const {
  absl::btree_set<Address> cuts = {range.lo, range.hi};
  for (const StoredRule* r : rules) {
    if (range.Contains(r->match.lo)) cuts.insert(r->match.lo);
    if (range.lo < r->match.hi && r->match.hi < range.hi) {
      cuts.insert(r->match.hi);
    }
  }
  std::vector<EquivalenceClass> out;
  std::vector<const StoredRule*> best(names_.size(), nullptr);
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const Interval segment{*it, *std::next(it)};
    std::fill(best.begin(), best.end(), nullptr);
    for (const StoredRule* r : rules) {
      if (!r->match.Contains(segment)) continue;
      const StoredRule*& b = best[r->source];
      if (b == nullptr || Better(*r, *b)) b = r;
    }
    EquivalenceClass ec{segment, {}};
    for (size_t n = 0; n < best.size(); ++n) {
      if (best[n] != nullptr) {
        ec.graph.push_back({static_cast<int>(n), best[n]->target, best[n]->id});
      }
    }
    out.push_back(std::move(ec));
  }
  return out;
}

std::vector<TrieBaseline::EquivalenceClass> TrieBaseline::AffectedEcs(
    const IpPrefix& p) const {
  absl::StatusOr<Interval> range = PrefixToInterval(p, space_);
  if (!range.ok()) return {};
  return Classify(*range, Overlapping(p));
}

std::vector<TrieBaseline::EquivalenceClass> TrieBaseline::LinkFailureEcs(
    absl::Span<const std::pair<int, int>> links) const {
  std::vector<EquivalenceClass> out;
  absl::btree_set<Interval> done;
  for (const auto& link : links) {
    auto it = by_link_.find(link);
    if (it == by_link_.end()) continue;
    std::vector<RuleId> ids(it->second.begin(), it->second.end());
    std::sort(ids.begin(), ids.end());
    for (RuleId id : ids) {
      for (EquivalenceClass& ec : AffectedEcs(rules_.at(id).prefix)) {
        if (done.insert(ec.range).second) out.push_back(std::move(ec));
      }
    }
  }
  return out;
}

bool TrieBaseline::HasLoop(const EquivalenceClass& ec) {
  absl::flat_hash_map<int, int> next;
  for (const Edge& e : ec.graph) next[e.source] = e.target;
  absl::flat_hash_map<int, int> state;  // 1 on the current walk, 2 finished
  for (const Edge& e : ec.graph) {
    std::vector<int> walk;
    int at = e.source;
    while (true) {
      auto s = state.find(at);
      if (s != state.end()) {
        if (s->second == 1) return true;
        break;
      }
      state[at] = 1;
      walk.push_back(at);
      auto n = next.find(at);
      if (n == next.end()) break;
      at = n->second;
    }
    for (int w : walk) state[w] = 2;
  }
  return false;
}

std::vector<std::pair<int, int>> TrieBaseline::Links() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [link, ids] : by_link_) out.push_back(link);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace deltanet
