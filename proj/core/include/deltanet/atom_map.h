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

// The global segmentation of the address space into atoms.
//
// An `AtomMap` is an ordered map from interval bounds to atom ids. Each key n
// (other than MAX) names the atom [n : next greater key). MIN and MAX are
// always present; MAX maps to the reserved id `kSentinelAtom`, which denotes
// no interval and never appears in a label. Registering an interval makes
// both of its bounds keys, splitting at most two existing atoms.

#ifndef DELTANET_ATOM_MAP_H_
#define DELTANET_ATOM_MAP_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "absl/container/btree_map.h"
#include "absl/container/inlined_vector.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "deltanet/address.h"

namespace deltanet {

using AtomId = uint32_t;

inline constexpr AtomId kSentinelAtom = std::numeric_limits<AtomId>::max();

// Records that the interval formerly denoted by `old_atom` is now split:
// `old_atom` keeps the lower part and `new_atom` takes the upper part.
struct DeltaPair {
  AtomId old_atom;
  AtomId new_atom;

  friend bool operator==(const DeltaPair& a, const DeltaPair& b) {
    return a.old_atom == b.old_atom && a.new_atom == b.new_atom;
  }
};

using DeltaPairs = absl::InlinedVector<DeltaPair, 2>;

class AtomMap {
 public:
  explicit AtomMap(AddressSpace space);

  const AddressSpace& space() const { return space_; }

  // Ensures `iv.lo` and `iv.hi` are keys. Requires `iv.IsValidIn(space())`.
  void CreateAtoms(const Interval& iv) { CreateAtomsPlus(iv); }

  // As `CreateAtoms`, returning one delta-pair per split, lower bound first.
  // A pair created by the lower bound may be split again by the upper bound.
  // When given, `lo_atom` and `hi_atom` receive the atoms keyed by the two
  // bounds (`kSentinelAtom` for MAX). Those ids never change.
  DeltaPairs CreateAtomsPlus(const Interval& iv, AtomId* lo_atom = nullptr,
                             AtomId* hi_atom = nullptr);

  // Ids covering `iv` in ascending address order. Both bounds must already be
  // keys.
  absl::StatusOr<std::vector<AtomId>> AtomsOf(const Interval& iv) const;

  // Calls `fn(AtomId)` for each atom covering `iv`, ascending. Same
  // precondition as `AtomsOf`.
  template <typename Fn>
  absl::Status ForEachAtom(const Interval& iv, Fn&& fn) const {
    auto it = bounds_.find(iv.lo);
    if (it == bounds_.end() || !bounds_.contains(iv.hi)) {
      return BoundsNotRegistered(iv);
    }
    for (; it->first != iv.hi; ++it) fn(it->second);
    return absl::OkStatus();
  }

  absl::StatusOr<Interval> IntervalOf(AtomId a) const;
  // The key `a` is stored under; MAX for `kSentinelAtom`. Requires a live id.
  Address KeyOf(AtomId a) const {
    return a == kSentinelAtom ? space_.max() : lower_bound_of_[a];
  }

  // The atom whose interval contains `addr`. Requires addr < MAX.
  AtomId AtomContaining(const Address& addr) const;

  // Number of atoms; always one less than the number of keys.
  size_t atom_count() const { return bounds_.size() - 1; }
  // Id the next split will receive. Ids [0, next_id()) are all live.
  AtomId next_id() const { return static_cast<AtomId>(lower_bound_of_.size()); }

  // Ordered "key<TAB>atom" lines; MAX is printed with atom "inf".
  std::string DebugDump() const;

  size_t MemoryBytes() const;

 private:
  static absl::Status BoundsNotRegistered(const Interval& iv);
  // Returns the atom keyed by `bound`.
  AtomId InsertBound(const Address& bound, DeltaPairs& delta);

  AddressSpace space_;
  absl::btree_map<Address, AtomId> bounds_;
  std::vector<Address> lower_bound_of_;
};

}  // namespace deltanet

#endif  // DELTANET_ATOM_MAP_H_
