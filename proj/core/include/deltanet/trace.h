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

// Line-oriented trace files.
//
//   + <id> <src> <dst|DROP> <priority> <prefix>
//   - <id>
//
// Fields are separated by exactly one space, lines end in LF, and lines
// starting with '#' are comments. Blank lines are skipped.

#ifndef DELTANET_TRACE_H_
#define DELTANET_TRACE_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "deltanet/address.h"
#include "deltanet/engine.h"
#include "deltanet/prefix.h"
#include "deltanet/topology.h"

namespace deltanet {

struct TraceOp {
  enum class Kind { kAdd, kDel };

  Kind kind = Kind::kAdd;
  RuleId id = 0;
  // The remaining fields are meaningful for adds only.
  std::string source;
  std::string target;
  Priority priority = 0;
  IpPrefix prefix;

  static TraceOp Add(RuleId id, std::string source, std::string target,
                     Priority priority, IpPrefix prefix);
  static TraceOp Del(RuleId id);

  friend bool operator==(const TraceOp& a, const TraceOp& b) {
    if (a.kind != b.kind || a.id != b.id) return false;
    if (a.kind == Kind::kDel) return true;
    return a.source == b.source && a.target == b.target &&
           a.priority == b.priority && a.prefix == b.prefix;
  }
};

// One line, without the trailing newline.
std::string FormatTraceOp(const TraceOp& op, const AddressSpace& space);

// Parses a single non-comment line. Errors name the 1-based column.
absl::StatusOr<TraceOp> ParseTraceLine(absl::string_view line,
                                       const AddressSpace& space);

// Streams ops from `in`, one line at a time. Tracks live ids so that
// deletes of unknown rules and re-adds of live ids fail at their line.
class TraceReader {
 public:
  TraceReader(std::istream& in, AddressSpace space,
              const Topology* topology = nullptr);

  // The next op, or nullopt at end of input.
  absl::StatusOr<std::optional<TraceOp>> Next();

  // Line number of the op last returned.
  size_t line() const { return line_; }
  const AddressSpace& space() const { return space_; }

 private:
  absl::Status CheckNode(absl::string_view name) const;

  std::istream& in_;
  AddressSpace space_;
  const Topology* topology_;
  size_t line_ = 0;
  absl::flat_hash_map<RuleId, size_t> live_;  // id -> line of its add
  std::string buffer_;
};

absl::StatusOr<std::vector<TraceOp>> ReadTrace(
    std::istream& in, const AddressSpace& space,
    const Topology* topology = nullptr);

void WriteTrace(std::ostream& out, absl::Span<const TraceOp> ops,
                const AddressSpace& space);

// Interns the op's node names and applies it.
absl::StatusOr<DeltaGraph> ApplyOp(Engine& engine, const TraceOp& op);

}  // namespace deltanet

#endif  // DELTANET_TRACE_H_
