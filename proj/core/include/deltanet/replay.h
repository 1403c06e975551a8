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

// Replays a trace through an engine, timing each op.

#ifndef DELTANET_REPLAY_H_
#define DELTANET_REPLAY_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "deltanet/analysis.h"
#include "deltanet/engine.h"
#include "deltanet/trace.h"

namespace deltanet {

enum class ReplayCheck { kNone, kLoops };

inline constexpr char kMetricsCsvHeader[] =
    "op_index,kind,micros,delta_atoms,changed_labels,violations";

struct OpRecord {
  size_t index = 0;
  TraceOp::Kind kind = TraceOp::Kind::kAdd;
  // Wall time of the engine update plus the check.
  double micros = 0;
  size_t delta_atoms = 0;
  size_t changed_labels = 0;
  size_t violations = 0;
};

struct ReplaySummary {
  size_t ops = 0;
  size_t total_atoms = 0;
  size_t max_rules = 0;
  size_t violations = 0;
  size_t priority_conflicts = 0;
  double median_micros = 0;
  double mean_micros = 0;
  double pct_under_250us = 0;
};

struct ReplayMetrics {
  std::vector<OpRecord> ops;
  // Atom count after each op.
  std::vector<size_t> atom_counts;
  size_t max_rules = 0;
  size_t priority_conflicts = 0;
  // Formatted violation reports, capped by ReplayOptions.
  std::vector<std::string> violation_reports;

  ReplaySummary Summarize() const;
};

struct ReplayOptions {
  ReplayCheck check = ReplayCheck::kLoops;
  // CSV rows, header first. Not owned; may be null.
  std::ostream* metrics_csv = nullptr;
  bool flush_every_op = false;
  // Violation reports are also streamed here when set.
  std::ostream* violations_out = nullptr;
  ReportFormat format = ReportFormat::kText;
  size_t max_stored_reports = 1000;
};

absl::StatusOr<ReplayMetrics> Replay(TraceReader& reader, Engine& engine,
                                     const ReplayOptions& options);
absl::StatusOr<ReplayMetrics> Replay(absl::Span<const TraceOp> ops,
                                     Engine& engine,
                                     const ReplayOptions& options);

std::string FormatMetricsRow(const OpRecord& record);
std::string FormatSummary(const ReplaySummary& summary, ReportFormat format);

}  // namespace deltanet

#endif  // DELTANET_REPLAY_H_
