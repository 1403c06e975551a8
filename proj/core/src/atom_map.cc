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

#include "deltanet/atom_map.h"

#include <cassert>
#include <iterator>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"

namespace deltanet {

AtomMap::AtomMap(AddressSpace space) : space_(space) {
  bounds_.emplace(space_.min(), AtomId{0});
  bounds_.emplace(space_.max(), kSentinelAtom);
  lower_bound_of_.push_back(space_.min());
}

absl::Status AtomMap::BoundsNotRegistered(const Interval& iv) {
  return absl::FailedPreconditionError(
      absl::StrCat("bounds not registered: ", iv.ToString()));
}

AtomId AtomMap::InsertBound(const Address& bound, DeltaPairs& delta) {
  auto [it, inserted] = bounds_.try_emplace(bound, next_id());
  if (!inserted) return it->second;
  // MIN is always a key, so a freshly inserted bound has a predecessor.
  const AtomId split = std::prev(it)->second;
  delta.push_back(DeltaPair{split, it->second});
  lower_bound_of_.push_back(bound);
  return it->second;
}

DeltaPairs AtomMap::CreateAtomsPlus(const Interval& iv, AtomId* lo_atom,
                                    AtomId* hi_atom) {
  assert(iv.IsValidIn(space_));
  DeltaPairs delta;
  const AtomId lo = InsertBound(iv.lo, delta);
  const AtomId hi = InsertBound(iv.hi, delta);
  if (lo_atom != nullptr) *lo_atom = lo;
  if (hi_atom != nullptr) *hi_atom = hi;
  return delta;
}

absl::StatusOr<std::vector<AtomId>> AtomMap::AtomsOf(const Interval& iv) const {
  std::vector<AtomId> atoms;
  absl::Status s = ForEachAtom(iv, [&](AtomId a) { atoms.push_back(a); });
  if (!s.ok()) return s;
  return atoms;
}

absl::StatusOr<Interval> AtomMap::IntervalOf(AtomId a) const {
  if (a >= lower_bound_of_.size()) {
    return absl::NotFoundError(absl::StrCat("unknown atom ", a));
  }
  const Address& lo = lower_bound_of_[a];
  auto next = bounds_.upper_bound(lo);
  return Interval{lo, next->first};
}

AtomId AtomMap::AtomContaining(const Address& addr) const {
  auto it = bounds_.upper_bound(addr);
  return std::prev(it)->second;
}

std::string AtomMap::DebugDump() const {
  std::string out;
  for (const auto& [key, atom] : bounds_) {
    if (atom == kSentinelAtom) {
      absl::StrAppend(&out, key.ToString(), "\tinf\n");
    } else {
      absl::StrAppend(&out, key.ToString(), "\t", atom, "\n");
    }
  }
  return out;
}

size_t AtomMap::MemoryBytes() const {
  return bounds_.size() * (sizeof(Address) + sizeof(AtomId)) +
         lower_bound_of_.capacity() * sizeof(Address);
}

}  // namespace deltanet
