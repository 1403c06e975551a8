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

#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/string_view.h"
#include "deltanet/analysis.h"
#include "nlohmann/json.hpp"

namespace deltanet {
namespace {

using Json = nlohmann::ordered_json;

Json IntervalsJson(const std::vector<Interval>& intervals) {
  Json out = Json::array();
  for (const Interval& iv : intervals) out.push_back(iv.ToString());
  return out;
}

std::string IntervalsText(const std::vector<Interval>& intervals) {
  return absl::StrJoin(intervals, ",", [](std::string* s, const Interval& iv) {
    s->append(iv.ToString());
  });
}

Json NodesJson(const Engine& engine, const std::vector<NodeId>& nodes) {
  Json out = Json::array();
  for (NodeId n : nodes) out.push_back(engine.NodeName(n));
  return out;
}

std::string NodesText(const Engine& engine, const std::vector<NodeId>& nodes,
                      absl::string_view sep) {
  return absl::StrJoin(nodes, sep, [&](std::string* s, NodeId n) {
    s->append(engine.NodeName(n));
  });
}

Json LinkJson(const Engine& engine, LinkId l) {
  const Link& link = engine.link(l);
  return Json::array(
      {engine.NodeName(link.source), engine.NodeName(link.target)});
}

std::string LinkText(const Engine& engine, LinkId l) {
  const Link& link = engine.link(l);
  return absl::StrCat(engine.NodeName(link.source), "->",
                      engine.NodeName(link.target));
}

}  // namespace

std::string FormatLoopReport(const Engine& engine, const LoopReport& report,
                             ReportFormat format) {
  if (format == ReportFormat::kText) {
    return absl::StrCat("loop ", NodesText(engine, report.cycle, " -> "),
                        " atoms=", report.atoms.Count(), " packets ",
                        IntervalsText(report.witness));
  }
  Json j;
  j["type"] = "loop";
  j["cycle"] = NodesJson(engine, report.cycle);
  j["atoms"] = report.atoms.ToVector();
  j["intervals"] = IntervalsJson(report.witness);
  return j.dump();
}

std::string FormatFailureReport(const Engine& engine,
                                const FailureReport& report,
                                ReportFormat format) {
  const std::vector<Interval> affected =
      IntervalsOf(engine.atoms(), report.affected);
  std::string out;
  if (format == ReportFormat::kText) {
    absl::StrAppend(
        &out, "failure ",
        absl::StrJoin(report.failed, ",",
                      [&](std::string* s, LinkId l) {
                        s->append(LinkText(engine, l));
                      }),
        " affected_atoms=", report.affected.Count(),
        " flows=", report.flows.size(), " packets ", IntervalsText(affected),
        "\n");
    for (const FailureOutcome& o : report.outcomes) {
      absl::StrAppend(&out, "  ", VerdictName(o.verdict), " from ",
                      engine.NodeName(o.start), " via ",
                      NodesText(engine, o.path, " -> "),
                      " atoms=", o.atoms.Count(), " packets ",
                      IntervalsText(IntervalsOf(engine.atoms(), o.atoms)),
                      "\n");
    }
    for (const LoopReport& loop : report.loops) {
      absl::StrAppend(&out, "  ",
                      FormatLoopReport(engine, loop, ReportFormat::kText),
                      "\n");
    }
    return out;
  }

  Json header;
  header["type"] = "failure";
  Json failed = Json::array();
  for (LinkId l : report.failed) failed.push_back(LinkJson(engine, l));
  header["failed"] = std::move(failed);
  header["affected_atoms"] = report.affected.Count();
  header["intervals"] = IntervalsJson(affected);
  header["flows"] = report.flows.size();
  header["outcomes"] = report.outcomes.size();
  header["loops"] = report.loops.size();
  absl::StrAppend(&out, header.dump(), "\n");
  for (const FailureOutcome& o : report.outcomes) {
    Json j;
    j["type"] = "outcome";
    j["verdict"] = std::string(VerdictName(o.verdict));
    j["start"] = engine.NodeName(o.start);
    j["path"] = NodesJson(engine, o.path);
    j["atoms"] = o.atoms.ToVector();
    j["intervals"] = IntervalsJson(IntervalsOf(engine.atoms(), o.atoms));
    absl::StrAppend(&out, j.dump(), "\n");
  }
  for (const LoopReport& loop : report.loops) {
    absl::StrAppend(&out, FormatLoopReport(engine, loop, ReportFormat::kMachine),
                    "\n");
  }
  for (const AffectedFlow& flow : report.flows) {
    Json j;
    j["type"] = "flow";
    j["link"] = LinkJson(engine, flow.link);
    j["atoms"] = flow.atoms.ToVector();
    absl::StrAppend(&out, j.dump(), "\n");
  }
  return out;
}

}  // namespace deltanet
