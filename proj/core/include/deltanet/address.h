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

// Addresses, address spaces and half-closed intervals.
//
// An address space of width k covers the integers [0, 2^k). Interval upper
// bounds may equal 2^k, so for k = 128 an `Address` must be able to hold
// 2^128; it therefore carries one extra "top" bit next to a 128-bit value.

#ifndef DELTANET_ADDRESS_H_
#define DELTANET_ADDRESS_H_

#include <cstdint>
#include <string>

#include "absl/numeric/int128.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace deltanet {

class Address {
 public:
  constexpr Address() = default;
  explicit constexpr Address(absl::uint128 value) : value_(value) {}
  explicit constexpr Address(uint64_t value) : value_(value) {}
  explicit constexpr Address(int value)
      : value_(static_cast<uint64_t>(value)) {}

  // 2^n for 0 <= n <= 128.
  static Address PowerOfTwo(int n);

  // True iff this address is exactly 2^128.
  bool is_top() const { return top_; }
  // The low 128 bits. Zero when `is_top()`.
  absl::uint128 low128() const { return value_; }
  // Truncating conversion; callers use it only in small address spaces.
  uint64_t ToUint64() const { return absl::Uint128Low64(value_); }

  // Bit `i` (0 = least significant) of the value, 0 <= i < 128.
  bool Bit(int i) const {
    return ((value_ >> i) & absl::uint128(1)) != 0;
  }

  // Sum and difference. Both operands and the result must lie in
  // [0, 2^128].
  Address operator+(const Address& other) const;
  Address operator-(const Address& other) const;
  Address& operator++();

  // Decimal representation.
  std::string ToString() const;

  friend bool operator==(const Address& a, const Address& b) {
    return a.top_ == b.top_ && a.value_ == b.value_;
  }
  friend bool operator<(const Address& a, const Address& b) {
    if (a.top_ != b.top_) return b.top_;
    return a.value_ < b.value_;
  }
  friend bool operator!=(const Address& a, const Address& b) {
    return !(a == b);
  }
  friend bool operator>(const Address& a, const Address& b) { return b < a; }
  friend bool operator<=(const Address& a, const Address& b) {
    return !(b < a);
  }
  friend bool operator>=(const Address& a, const Address& b) {
    return !(a < b);
  }

  template <typename H>
  friend H AbslHashValue(H h, const Address& a) {
    return H::combine(std::move(h), a.top_, a.value_);
  }

 private:
  absl::uint128 value_ = 0;
  bool top_ = false;
};

// Parses an unsigned decimal integer no greater than 2^128.
absl::StatusOr<Address> ParseDecimalAddress(absl::string_view text);

// The k-bit address space [MIN, MAX) with MIN = 0 and MAX = 2^k.
class AddressSpace {
 public:
  // Fails unless 1 <= bits <= 128.
  static absl::StatusOr<AddressSpace> Create(int bits);

  // IPv4-sized space.
  AddressSpace() : AddressSpace(32, Address::PowerOfTwo(32)) {}

  int bits() const { return bits_; }
  Address min() const { return Address(); }
  Address max() const { return max_; }

  friend bool operator==(const AddressSpace& a, const AddressSpace& b) {
    return a.bits_ == b.bits_;
  }

 private:
  AddressSpace(int bits, Address max) : bits_(bits), max_(max) {}

  int bits_;
  Address max_;
};

// Half-closed interval [lo : hi).
struct Interval {
  Address lo;
  Address hi;

  bool Contains(const Address& a) const { return lo <= a && a < hi; }
  bool Contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool Overlaps(const Interval& other) const {
    return lo < other.hi && other.lo < hi;
  }
  bool IsValidIn(const AddressSpace& space) const {
    return lo < hi && hi <= space.max();
  }

  // "[lo:hi)" in decimal.
  std::string ToString() const;

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator!=(const Interval& a, const Interval& b) {
    return !(a == b);
  }
  friend bool operator<(const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.hi < b.hi;
  }
};

// Convenience constructor for small spaces.
inline Interval MakeInterval(uint64_t lo, uint64_t hi) {
  return Interval{Address(lo), Address(hi)};
}

}  // namespace deltanet

#endif  // DELTANET_ADDRESS_H_
