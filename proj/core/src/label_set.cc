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

#include "deltanet/label_set.h"

#include <algorithm>
#include <bit>

namespace deltanet {

LabelSet::LabelSet(std::initializer_list<AtomId> atoms) {
  for (AtomId a : atoms) Set(a);
}

LabelSet LabelSet::FirstN(size_t count) {
  LabelSet s;
  if (count == 0) return s;
  s.Grow((count + kWordBits - 1) / kWordBits);
  const size_t full = count / kWordBits;
  for (size_t w = 0; w < full; ++w) s.words_[w] = ~uint64_t{0};
  if (const size_t rest = count % kWordBits; rest != 0) {
    s.words_[full] = (uint64_t{1} << rest) - 1;
  }
  return s;
}

void LabelSet::Grow(size_t min_words) {
  const size_t blocks = (min_words + kBlockWords - 1) / kBlockWords;
  words_.resize(blocks * kBlockWords, 0);
}

bool LabelSet::Empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](uint64_t w) { return w == 0; });
}

size_t LabelSet::Count() const {
  size_t n = 0;
  for (uint64_t w : words_) n += static_cast<size_t>(std::popcount(w));
  return n;
}

LabelSet& LabelSet::operator|=(const LabelSet& other) {
  if (other.words_.size() > words_.size()) Grow(other.words_.size());
  for (size_t w = 0; w < other.words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

LabelSet& LabelSet::operator&=(const LabelSet& other) {
  const size_t common = std::min(words_.size(), other.words_.size());
  for (size_t w = 0; w < common; ++w) words_[w] &= other.words_[w];
  std::fill(words_.begin() + static_cast<std::ptrdiff_t>(common), words_.end(),
            0);
  return *this;
}

LabelSet& LabelSet::Subtract(const LabelSet& other) {
  const size_t common = std::min(words_.size(), other.words_.size());
  for (size_t w = 0; w < common; ++w) words_[w] &= ~other.words_[w];
  return *this;
}

void LabelSet::UniteWithIntersection(const LabelSet& a, const LabelSet& b) {
  const size_t common = std::min(a.words_.size(), b.words_.size());
  if (common > words_.size()) Grow(common);
  const uint64_t* aw = a.words_.data();
  const uint64_t* bw = b.words_.data();
  for (size_t w = 0; w < common; ++w) words_[w] |= aw[w] & bw[w];
}

bool LabelSet::Intersects(const LabelSet& other) const {
  const size_t common = std::min(words_.size(), other.words_.size());
  for (size_t w = 0; w < common; ++w) {
    if ((words_[w] & other.words_[w]) != 0) return true;
  }
  return false;
}

bool LabelSet::IsSubsetOf(const LabelSet& other) const {
  for (size_t w = 0; w < words_.size(); ++w) {
    const uint64_t theirs = w < other.words_.size() ? other.words_[w] : 0;
    if ((words_[w] & ~theirs) != 0) return false;
  }
  return true;
}

std::vector<AtomId> LabelSet::ToVector() const {
  std::vector<AtomId> out;
  ForEach([&](AtomId a) { out.push_back(a); });
  return out;
}

bool operator==(const LabelSet& a, const LabelSet& b) {
  const size_t common = std::min(a.words_.size(), b.words_.size());
  for (size_t w = 0; w < common; ++w) {
    if (a.words_[w] != b.words_[w]) return false;
  }
  const auto& longer = a.words_.size() > b.words_.size() ? a.words_ : b.words_;
  for (size_t w = common; w < longer.size(); ++w) {
    if (longer[w] != 0) return false;
  }
  return true;
}

}  // namespace deltanet
