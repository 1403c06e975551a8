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

#include "deltanet/prefix.h"

#include <cstdint>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace deltanet {
namespace {

absl::Status Malformed(absl::string_view why, size_t offset) {
  return absl::InvalidArgumentError(
      absl::StrCat("malformed prefix: ", why, " at byte ", offset));
}

// Width 2^(k - len) of the prefix block.
Address BlockSize(int bits, int length) {
  return Address::PowerOfTwo(bits - length);
}

bool LowBitsClear(const Address& base, int low_bits) {
  if (low_bits == 0) return true;
  if (base.is_top()) return false;
  if (low_bits >= 128) return base.low128() == 0;
  const absl::uint128 mask = (absl::uint128(1) << low_bits) - 1;
  return (base.low128() & mask) == 0;
}

// Parses a run of decimal digits starting at `pos`; advances `pos`.
std::optional<uint64_t> ParseSmallNumber(absl::string_view text, size_t& pos,
                                         uint64_t limit) {
  const size_t start = pos;
  uint64_t value = 0;
  while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
    value = value * 10 + static_cast<uint64_t>(text[pos] - '0');
    if (value > limit || pos - start >= 20) return std::nullopt;
    ++pos;
  }
  if (pos == start) return std::nullopt;
  return value;
}

}  // namespace

absl::Status ValidatePrefix(const IpPrefix& p, const AddressSpace& space) {
  if (p.length < 0 || p.length > space.bits()) {
    return Malformed(absl::StrCat("length ", p.length, " exceeds ",
                                  space.bits(), " bits"),
                     0);
  }
  if (!(p.base < space.max())) {
    return Malformed("base outside the address space", 0);
  }
  if (!LowBitsClear(p.base, space.bits() - p.length)) {
    return Malformed("bits set below the prefix length", 0);
  }
  return absl::OkStatus();
}

absl::StatusOr<Interval> PrefixToInterval(const IpPrefix& p,
                                          const AddressSpace& space) {
  if (absl::Status s = ValidatePrefix(p, space); !s.ok()) return s;
  return Interval{p.base, p.base + BlockSize(space.bits(), p.length)};
}

absl::StatusOr<IpPrefix> ParsePrefix(absl::string_view text,
                                     const AddressSpace& space) {
  const size_t slash = text.find('/');
  if (slash == absl::string_view::npos) {
    return Malformed("missing '/'", text.size());
  }
  IpPrefix p;
  if (space.bits() == 32) {
    size_t pos = 0;
    uint64_t base = 0;
    for (int octet = 0; octet < 4; ++octet) {
      std::optional<uint64_t> v = ParseSmallNumber(text, pos, 255);
      if (!v.has_value()) return Malformed("bad octet", pos);
      base = (base << 8) | *v;
      if (octet < 3) {
        if (pos >= text.size() || text[pos] != '.') {
          return Malformed("expected '.'", pos);
        }
        ++pos;
      }
    }
    if (pos != slash) return Malformed("expected '/'", pos);
    p.base = Address(base);
  } else {
    const absl::string_view digits = text.substr(0, slash);
    for (size_t i = 0; i < digits.size(); ++i) {
      if (digits[i] < '0' || digits[i] > '9') {
        return Malformed("expected decimal digit", i);
      }
    }
    absl::StatusOr<Address> base = ParseDecimalAddress(digits);
    if (!base.ok()) return Malformed("bad base", 0);
    p.base = *base;
  }
  size_t pos = slash + 1;
  std::optional<uint64_t> len = ParseSmallNumber(text, pos, 1000);
  if (!len.has_value()) return Malformed("bad length", pos);
  if (pos != text.size()) return Malformed("trailing characters", pos);
  if (*len > static_cast<uint64_t>(space.bits())) {
    return Malformed(
        absl::StrCat("length ", *len, " exceeds ", space.bits(), " bits"),
        slash + 1);
  }
  p.length = static_cast<int>(*len);
  if (!(p.base < space.max())) {
    return Malformed("base outside the address space", 0);
  }
  if (!LowBitsClear(p.base, space.bits() - p.length)) {
    return Malformed("bits set below the prefix length", 0);
  }
  return p;
}

std::string FormatPrefix(const IpPrefix& p, const AddressSpace& space) {
  if (space.bits() == 32) {
    const uint64_t v = p.base.ToUint64();
    return absl::StrCat((v >> 24) & 0xff, ".", (v >> 16) & 0xff, ".",
                        (v >> 8) & 0xff, ".", v & 0xff, "/", p.length);
  }
  return absl::StrCat(p.base.ToString(), "/", p.length);
}

std::optional<IpPrefix> IntervalToPrefix(const Interval& iv,
                                         const AddressSpace& space) {
  if (!iv.IsValidIn(space)) return std::nullopt;
  const Address width = iv.hi - iv.lo;
  int log2 = -1;
  for (int n = 0; n <= space.bits(); ++n) {
    if (Address::PowerOfTwo(n) == width) {
      log2 = n;
      break;
    }
  }
  if (log2 < 0) return std::nullopt;
  IpPrefix p{iv.lo, space.bits() - log2};
  if (!LowBitsClear(p.base, log2)) return std::nullopt;
  return p;
}

}  // namespace deltanet
