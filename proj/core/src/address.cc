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

#include "deltanet/address.h"

#include <algorithm>
#include <cassert>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace deltanet {

Address Address::PowerOfTwo(int n) {
  assert(n >= 0 && n <= 128);
  Address a;
  if (n == 128) {
    a.top_ = true;
  } else {
    a.value_ = absl::uint128(1) << n;
  }
  return a;
}

Address Address::operator+(const Address& other) const {
  Address sum;
  if (top_ || other.top_) {
    assert((top_ && other == Address()) || (other.top_ && *this == Address()));
    sum.top_ = true;
    return sum;
  }
  sum.value_ = value_ + other.value_;
  // Unsigned wraparound means the true sum is 2^128 + value_; only 2^128
  // itself is representable.
  if (sum.value_ < value_) {
    assert(sum.value_ == 0);
    sum.top_ = true;
  }
  return sum;
}

Address Address::operator-(const Address& other) const {
  assert(other <= *this);
  Address diff;
  if (top_) {
    if (other.top_) return diff;
    // 2^128 - v  ==  (2^128 - 1) - v + 1, computed without overflow.
    if (other.value_ == 0) return *this;
    diff.value_ = (absl::Uint128Max() - other.value_) + 1;
    return diff;
  }
  diff.value_ = value_ - other.value_;
  return diff;
}

Address& Address::operator++() {
  *this = *this + Address(uint64_t{1});
  return *this;
}

std::string Address::ToString() const {
  if (top_) return "340282366920938463463374607431768211456";
  if (value_ == 0) return "0";
  std::string digits;
  absl::uint128 v = value_;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' + absl::Uint128Low64(v % 10)));
    v /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

absl::StatusOr<Address> ParseDecimalAddress(absl::string_view text) {
  if (text.empty()) return absl::InvalidArgumentError("empty number");
  static const std::string* const kTwoTo128 =
      new std::string(Address::PowerOfTwo(128).ToString());
  if (text == *kTwoTo128) return Address::PowerOfTwo(128);
  absl::uint128 value = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      return absl::InvalidArgumentError(
          absl::StrCat("unexpected character at byte ", i));
    }
    const absl::uint128 digit = static_cast<uint64_t>(c - '0');
    if (value > (absl::Uint128Max() - digit) / 10) {
      return absl::InvalidArgumentError("number exceeds 2^128");
    }
    value = value * 10 + digit;
  }
  return Address(value);
}

absl::StatusOr<AddressSpace> AddressSpace::Create(int bits) {
  if (bits < 1 || bits > 128) {
    return absl::InvalidArgumentError(
        absl::StrCat("address width must be in [1, 128], got ", bits));
  }
  return AddressSpace(bits, Address::PowerOfTwo(bits));
}

std::string Interval::ToString() const {
  return absl::StrCat("[", lo.ToString(), ":", hi.ToString(), ")");
}

}  // namespace deltanet
