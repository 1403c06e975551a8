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

#include "deltanet/trace.h"

#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"

namespace deltanet {
namespace {

absl::Status ColumnError(size_t column, absl::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("column ", column, ": ", what));
}

// Splits on single spaces, remembering the 1-based column of each field.
struct Field {
  absl::string_view text;
  size_t column;
};

std::vector<Field> SplitFields(absl::string_view line) {
  std::vector<Field> fields;
  size_t start = 0;
  while (true) {
    const size_t end = line.find(' ', start);
    fields.push_back({line.substr(start, end == absl::string_view::npos
                                             ? absl::string_view::npos
                                             : end - start),
                      start + 1});
    if (end == absl::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

template <typename T>
absl::StatusOr<T> ParseUnsigned(const Field& f, absl::string_view what) {
  if (f.text.empty()) return ColumnError(f.column, absl::StrCat("missing ", what));
  uint64_t value = 0;
  for (size_t i = 0; i < f.text.size(); ++i) {
    const char c = f.text[i];
    if (c < '0' || c > '9') {
      return ColumnError(f.column + i, absl::StrCat("bad ", what));
    }
    const uint64_t digit = static_cast<uint64_t>(c - '0');
    if (value > (std::numeric_limits<T>::max() - digit) / 10) {
      return ColumnError(f.column, absl::StrCat(what, " out of range"));
    }
    value = value * 10 + digit;
  }
  return static_cast<T>(value);
}

absl::Status CheckToken(const Field& f, absl::string_view what) {
  if (f.text.empty()) return ColumnError(f.column, absl::StrCat("missing ", what));
  for (size_t i = 0; i < f.text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(f.text[i]);
    if (c <= ' ' || c == 0x7f) {
      return ColumnError(f.column + i, absl::StrCat("bad character in ", what));
    }
  }
  return absl::OkStatus();
}

}  // namespace

TraceOp TraceOp::Add(RuleId id, std::string source, std::string target,
                     Priority priority, IpPrefix prefix) {
  TraceOp op;
  op.kind = Kind::kAdd;
  op.id = id;
  op.source = std::move(source);
  op.target = std::move(target);
  op.priority = priority;
  op.prefix = prefix;
  return op;
}

TraceOp TraceOp::Del(RuleId id) {
  TraceOp op;
  op.kind = Kind::kDel;
  op.id = id;
  return op;
}

std::string FormatTraceOp(const TraceOp& op, const AddressSpace& space) {
  if (op.kind == TraceOp::Kind::kDel) return absl::StrCat("- ", op.id);
  return absl::StrCat("+ ", op.id, " ", op.source, " ", op.target, " ",
                      op.priority, " ", FormatPrefix(op.prefix, space));
}

absl::StatusOr<TraceOp> ParseTraceLine(absl::string_view line,
                                       const AddressSpace& space) {
  if (!line.empty() && line.back() == '\r') {
    return ColumnError(line.size(), "carriage return; expected LF line endings");
  }
  const std::vector<Field> f = SplitFields(line);
  if (f[0].text == "-") {
    if (f.size() != 2) {
      return ColumnError(f.size() < 2 ? line.size() + 1 : f[2].column,
                         "delete takes exactly one field");
    }
    absl::StatusOr<RuleId> id = ParseUnsigned<RuleId>(f[1], "rule id");
    if (!id.ok()) return id.status();
    return TraceOp::Del(*id);
  }
  if (f[0].text != "+") {
    return ColumnError(1, "expected '+' or '-'");
  }
  if (f.size() != 6) {
    return ColumnError(f.size() < 6 ? line.size() + 1 : f[6].column,
                       "add takes exactly five fields");
  }
  absl::StatusOr<RuleId> id = ParseUnsigned<RuleId>(f[1], "rule id");
  if (!id.ok()) return id.status();
  if (absl::Status s = CheckToken(f[2], "source node"); !s.ok()) return s;
  if (absl::Status s = CheckToken(f[3], "target node"); !s.ok()) return s;
  absl::StatusOr<Priority> prio = ParseUnsigned<Priority>(f[4], "priority");
  if (!prio.ok()) return prio.status();
  absl::StatusOr<IpPrefix> prefix = ParsePrefix(f[5].text, space);
  if (!prefix.ok()) {
    return ColumnError(f[5].column, prefix.status().message());
  }
  return TraceOp::Add(*id, std::string(f[2].text), std::string(f[3].text),
                      *prio, *prefix);
}

TraceReader::TraceReader(std::istream& in, AddressSpace space,
                         const Topology* topology)
    : in_(in), space_(space), topology_(topology) {}

absl::Status TraceReader::CheckNode(absl::string_view name) const {
  if (topology_ == nullptr || name == kDropNodeName) return absl::OkStatus();
  if (topology_->Find(name).has_value()) return absl::OkStatus();
  return absl::NotFoundError(
      absl::StrCat("line ", line_, ": unknown node '", name, "'"));
}

absl::StatusOr<std::optional<TraceOp>> TraceReader::Next() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (buffer_.empty() || buffer_[0] == '#') continue;
    absl::StatusOr<TraceOp> op = ParseTraceLine(buffer_, space_);
    if (!op.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_, ", ", op.status().message()));
    }
    if (op->kind == TraceOp::Kind::kDel) {
      if (live_.erase(op->id) == 0) {
        return absl::FailedPreconditionError(absl::StrCat(
            "line ", line_, ": dangling delete of rule ", op->id));
      }
    } else {
      if (absl::Status s = CheckNode(op->source); !s.ok()) return s;
      if (absl::Status s = CheckNode(op->target); !s.ok()) return s;
      auto [it, inserted] = live_.emplace(op->id, line_);
      if (!inserted) {
        return absl::AlreadyExistsError(
            absl::StrCat("line ", line_, ": rule ", op->id,
                         " is already live (added at line ", it->second, ")"));
      }
    }
    return std::optional<TraceOp>(*std::move(op));
  }
  if (in_.bad()) {
    return absl::DataLossError(absl::StrCat("read error after line ", line_));
  }
  return std::optional<TraceOp>();
}

absl::StatusOr<std::vector<TraceOp>> ReadTrace(std::istream& in,
                                               const AddressSpace& space,
                                               const Topology* topology) {
  TraceReader reader(in, space, topology);
  std::vector<TraceOp> ops;
  while (true) {
    absl::StatusOr<std::optional<TraceOp>> op = reader.Next();
    if (!op.ok()) return op.status();
    if (!op->has_value()) break;
    ops.push_back(**std::move(op));
  }
  return ops;
}

void WriteTrace(std::ostream& out, absl::Span<const TraceOp> ops,
                const AddressSpace& space) {
  for (const TraceOp& op : ops) out << FormatTraceOp(op, space) << '\n';
}

absl::StatusOr<DeltaGraph> ApplyOp(Engine& engine, const TraceOp& op) {
  if (op.kind == TraceOp::Kind::kDel) return engine.RemoveRule(op.id);
  absl::StatusOr<Interval> match = PrefixToInterval(op.prefix, engine.space());
  if (!match.ok()) return match.status();
  Rule rule;
  rule.id = op.id;
  rule.link = Link{engine.InternNode(op.source), engine.InternNode(op.target)};
  rule.priority = op.priority;
  rule.match = *match;
  return engine.InsertRule(rule);
}

}  // namespace deltanet
