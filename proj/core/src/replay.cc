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

#include "deltanet/replay.h"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/string_view.h"

namespace deltanet {
namespace {

class Replayer {
 public:
  Replayer(Engine& engine, const ReplayOptions& options)
      : engine_(engine), options_(options) {
    if (options_.metrics_csv != nullptr) {
      *options_.metrics_csv << kMetricsCsvHeader << '\n';
    }
  }

  void Reserve(size_t ops) {
    metrics_.ops.reserve(ops);
    metrics_.atom_counts.reserve(ops);
  }

  absl::Status Step(const TraceOp& op, absl::string_view where) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    absl::StatusOr<DeltaGraph> delta = ApplyOp(engine_, op);
    if (!delta.ok()) {
      return absl::Status(delta.status().code(),
                          absl::StrCat("op ", metrics_.ops.size(), where, ": ",
                                       delta.status().message()));
    }
    std::vector<LoopReport> loops;
    if (options_.check == ReplayCheck::kLoops) loops = CheckLoops(engine_, *delta);
    const auto stop = Clock::now();

    OpRecord record;
    record.index = metrics_.ops.size();
    record.kind = op.kind;
    record.micros =
        std::chrono::duration<double, std::micro>(stop - start).count();
    record.delta_atoms = delta->splits.size();
    record.changed_labels = delta->changed_label_count();
    record.violations = loops.size();
    metrics_.ops.push_back(record);
    metrics_.atom_counts.push_back(engine_.atoms().atom_count());
    metrics_.max_rules = std::max(metrics_.max_rules, engine_.rule_count());
    if (delta->priority_conflict) ++metrics_.priority_conflicts;
    for (const LoopReport& loop : loops) {
      std::string text = FormatLoopReport(engine_, loop, options_.format);
      if (options_.violations_out != nullptr) {
        *options_.violations_out << text << '\n';
      }
      if (metrics_.violation_reports.size() < options_.max_stored_reports) {
        metrics_.violation_reports.push_back(std::move(text));
      }
    }
    if (options_.metrics_csv != nullptr) {
      *options_.metrics_csv << FormatMetricsRow(record) << '\n';
      if (options_.flush_every_op) options_.metrics_csv->flush();
    }
    return absl::OkStatus();
  }

  ReplayMetrics Finish() {
    if (options_.metrics_csv != nullptr) options_.metrics_csv->flush();
    return std::move(metrics_);
  }

 private:
  Engine& engine_;
  const ReplayOptions& options_;
  ReplayMetrics metrics_;
};

}  // namespace

ReplaySummary ReplayMetrics::Summarize() const {
  ReplaySummary s;
  s.ops = ops.size();
  s.total_atoms = atom_counts.empty() ? 0 : atom_counts.back();
  s.max_rules = max_rules;
  s.priority_conflicts = priority_conflicts;
  if (ops.empty()) return s;
  std::vector<double> times;
  times.reserve(ops.size());
  double total = 0;
  size_t fast = 0;
  for (const OpRecord& r : ops) {
    times.push_back(r.micros);
    total += r.micros;
    if (r.micros < 250.0) ++fast;
    s.violations += r.violations;
  }
  std::sort(times.begin(), times.end());
  const size_t n = times.size();
  s.median_micros =
      n % 2 == 1 ? times[n / 2] : (times[n / 2 - 1] + times[n / 2]) / 2;
  s.mean_micros = total / static_cast<double>(n);
  s.pct_under_250us = 100.0 * static_cast<double>(fast) / static_cast<double>(n);
  return s;
}

absl::StatusOr<ReplayMetrics> Replay(TraceReader& reader, Engine& engine,
                                     const ReplayOptions& options) {
  Replayer replayer(engine, options);
  size_t index = 0;
  while (true) {
    absl::StatusOr<std::optional<TraceOp>> op = reader.Next();
    if (!op.ok()) {
      return absl::Status(op.status().code(),
                          absl::StrCat("op ", index, ": ", op.status().message()));
    }
    if (!op->has_value()) break;
    absl::Status s =
        replayer.Step(**op, absl::StrCat(" (line ", reader.line(), ")"));
    if (!s.ok()) return s;
    ++index;
  }
  return replayer.Finish();
}

absl::StatusOr<ReplayMetrics> Replay(absl::Span<const TraceOp> ops,
                                     Engine& engine,
                                     const ReplayOptions& options) {
  Replayer replayer(engine, options);
  const size_t adds = std::count_if(ops.begin(), ops.end(), [](const TraceOp& op) {
    return op.kind == TraceOp::Kind::kAdd;
  });
  engine.ReserveRules(engine.rule_count() + adds);
  replayer.Reserve(ops.size());
  for (const TraceOp& op : ops) {
    if (absl::Status s = replayer.Step(op, ""); !s.ok()) return s;
  }
  return replayer.Finish();
}

std::string FormatMetricsRow(const OpRecord& r) {
  return absl::StrFormat("%d,%s,%.3f,%d,%d,%d", r.index,
                         r.kind == TraceOp::Kind::kAdd ? "add" : "del",
                         r.micros, r.delta_atoms, r.changed_labels,
                         r.violations);
}

std::string FormatSummary(const ReplaySummary& s, ReportFormat format) {
  if (format == ReportFormat::kMachine) {
    return absl::StrFormat(
        "{\"type\":\"summary\",\"ops\":%d,\"total_atoms\":%d,\"max_rules\":%d,"
        "\"median_us\":%.3f,\"mean_us\":%.3f,\"pct_under_250us\":%.3f,"
        "\"violations\":%d,\"priority_conflicts\":%d}",
        s.ops, s.total_atoms, s.max_rules, s.median_micros, s.mean_micros,
        s.pct_under_250us, s.violations, s.priority_conflicts);
  }
  return absl::StrFormat(
      "ops: %d\n"
      "total atoms: %d\n"
      "max rules: %d\n"
      "median us/op: %.3f\n"
      "mean us/op: %.3f\n"
      "pct < 250us: %.2f\n"
      "violations: %d\n"
      "priority conflicts: %d\n",
      s.ops, s.total_atoms, s.max_rules, s.median_micros, s.mean_micros,
      s.pct_under_250us, s.violations, s.priority_conflicts);
}

}  // namespace deltanet
