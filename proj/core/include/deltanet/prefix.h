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

// CIDR prefixes and their interval meaning.
//
// A prefix `base/len` in a k-bit space denotes [base : base + 2^(k - len)).
// Text syntax is dotted-quad for k = 32 ("10.0.0.0/8") and a decimal base
// for every other width ("10/3" in a 4-bit space).

#ifndef DELTANET_PREFIX_H_
#define DELTANET_PREFIX_H_

#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "deltanet/address.h"

namespace deltanet {

struct IpPrefix {
  Address base;
  int length = 0;

  friend bool operator==(const IpPrefix& a, const IpPrefix& b) {
    return a.base == b.base && a.length == b.length;
  }
  friend bool operator!=(const IpPrefix& a, const IpPrefix& b) {
    return !(a == b);
  }
  friend bool operator<(const IpPrefix& a, const IpPrefix& b) {
    if (a.base != b.base) return a.base < b.base;
    return a.length < b.length;
  }
};

// Validates that `p` fits `space` and is canonical (no bits set below the
// prefix length). Errors are InvalidArgument with a "malformed prefix"
// message.
absl::Status ValidatePrefix(const IpPrefix& p, const AddressSpace& space);

absl::StatusOr<Interval> PrefixToInterval(const IpPrefix& p,
                                          const AddressSpace& space);

// Parses the text syntax for `space`. Errors report the byte offset of the
// offending character.
absl::StatusOr<IpPrefix> ParsePrefix(absl::string_view text,
                                     const AddressSpace& space);

std::string FormatPrefix(const IpPrefix& p, const AddressSpace& space);

// The prefix whose interval is exactly `iv`, if one exists.
std::optional<IpPrefix> IntervalToPrefix(const Interval& iv,
                                         const AddressSpace& space);

}  // namespace deltanet

#endif  // DELTANET_PREFIX_H_
