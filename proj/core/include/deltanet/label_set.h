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

#ifndef DELTANET_LABEL_SET_H_
#define DELTANET_LABEL_SET_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "deltanet/atom_map.h"

namespace deltanet {

// Growable bitset of atom ids. Bits past the allocated length read as zero;
// storage grows in fixed blocks so repeated single-bit growth stays cheap.
class LabelSet {
 public:
  static constexpr size_t kWordBits = 64;
  static constexpr size_t kBlockWords = 8;

  LabelSet() = default;
  LabelSet(std::initializer_list<AtomId> atoms);

  // Every id in [0, count).
  static LabelSet FirstN(size_t count);

  bool Test(AtomId a) const {
    const size_t w = a / kWordBits;
    return w < words_.size() && ((words_[w] >> (a % kWordBits)) & 1) != 0;
  }
  void Set(AtomId a) {
    const size_t w = a / kWordBits;
    if (w >= words_.size()) Grow(w + 1);
    words_[w] |= uint64_t{1} << (a % kWordBits);
  }
  void Reset(AtomId a) {
    const size_t w = a / kWordBits;
    if (w < words_.size()) words_[w] &= ~(uint64_t{1} << (a % kWordBits));
  }

  bool Empty() const;
  size_t Count() const;
  void Clear() { words_.clear(); }

  LabelSet& operator|=(const LabelSet& other);
  LabelSet& operator&=(const LabelSet& other);
  // Removes every member of `other`.
  LabelSet& Subtract(const LabelSet& other);
  // this |= (a & b). Any of the three may alias.
  void UniteWithIntersection(const LabelSet& a, const LabelSet& b);
  bool Intersects(const LabelSet& other) const;
  bool IsSubsetOf(const LabelSet& other) const;

  friend LabelSet operator|(LabelSet a, const LabelSet& b) { return a |= b; }
  friend LabelSet operator&(LabelSet a, const LabelSet& b) { return a &= b; }

  // Calls `fn(AtomId)` for every member in ascending order.
  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (size_t w = 0; w < words_.size(); ++w) {
      uint64_t bits = words_[w];
      while (bits != 0) {
        const int bit = __builtin_ctzll(bits);
        fn(static_cast<AtomId>(w * kWordBits + static_cast<size_t>(bit)));
        bits &= bits - 1;
      }
    }
  }

  std::vector<AtomId> ToVector() const;

  // Bytes of heap storage.
  size_t MemoryBytes() const { return words_.capacity() * sizeof(uint64_t); }

  // Equality of the represented sets; trailing zero words do not matter.
  friend bool operator==(const LabelSet& a, const LabelSet& b);
  friend bool operator!=(const LabelSet& a, const LabelSet& b) {
    return !(a == b);
  }

 private:
  void Grow(size_t min_words);

  std::vector<uint64_t> words_;
};

}  // namespace deltanet

#endif  // DELTANET_LABEL_SET_H_
