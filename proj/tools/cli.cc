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

#include "cli.h"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "deltanet/analysis.h"
#include "deltanet/engine.h"
#include "deltanet/generator.h"
#include "deltanet/replay.h"
#include "deltanet/topology.h"
#include "deltanet/trace.h"

namespace deltanet {
namespace {

struct CommonFlags {
  std::string trace;
  std::string topo;
  std::string metrics_out;
  std::string format = "text";
  int k = 32;
  uint64_t seed = 1;
};

void AddInputFlags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--trace", f.trace, "Trace file, or - for stdin")->required();
  cmd->add_option("--topo", f.topo, "Topology file; node names are checked");
  cmd->add_option("--k", f.k, "Address width in bits")
      ->check(CLI::Range(1, 128));
  cmd->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"text", "machine"}));
}

class Session {
 public:
  Session(const CommonFlags& flags, std::istream& in) : flags_(flags), in_(in) {}

  absl::Status Open() {
    absl::StatusOr<AddressSpace> space = AddressSpace::Create(flags_.k);
    if (!space.ok()) return space.status();
    space_ = *space;
    if (!flags_.topo.empty()) {
      std::ifstream file(flags_.topo);
      if (!file) return absl::NotFoundError(absl::StrCat("cannot open ", flags_.topo));
      absl::StatusOr<Topology> topo = ParseTopology(file);
      if (!topo.ok()) return topo.status();
      topology_ = *std::move(topo);
    }
    std::istream* trace = &in_;
    if (flags_.trace != "-") {
      file_ = std::make_unique<std::ifstream>(flags_.trace);
      if (!*file_) {
        return absl::NotFoundError(absl::StrCat("cannot open ", flags_.trace));
      }
      trace = file_.get();
    }
    reader_ = std::make_unique<TraceReader>(
        *trace, space_, topology_.has_value() ? &*topology_ : nullptr);
    engine_ = std::make_unique<Engine>(space_);
    return absl::OkStatus();
  }

  // Applies the trace's adds, or every op when `adds_only` is false.
  absl::Status LoadPlane(bool adds_only) {
    while (true) {
      absl::StatusOr<std::optional<TraceOp>> op = reader_->Next();
      if (!op.ok()) return op.status();
      if (!op->has_value()) return absl::OkStatus();
      if (adds_only && (*op)->kind == TraceOp::Kind::kDel) continue;
      absl::StatusOr<DeltaGraph> d = ApplyOp(*engine_, **op);
      if (!d.ok()) {
        return absl::Status(d.status().code(),
                            absl::StrCat("line ", reader_->line(), ": ",
                                         d.status().message()));
      }
    }
  }

  ReportFormat format() const {
    return flags_.format == "machine" ? ReportFormat::kMachine
                                      : ReportFormat::kText;
  }
  Engine& engine() { return *engine_; }
  TraceReader& reader() { return *reader_; }

 private:
  const CommonFlags& flags_;
  std::istream& in_;
  AddressSpace space_;
  std::optional<Topology> topology_;
  std::unique_ptr<std::ifstream> file_;
  std::unique_ptr<TraceReader> reader_;
  std::unique_ptr<Engine> engine_;
};

int InputError(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return kExitInputError;
}

bool FlushEveryOp() {
  const char* v = std::getenv("DELTANET_METRICS_FLUSH");
  return v != nullptr && std::string(v) == "every_op";
}

int RunReplay(const CommonFlags& flags, const std::string& check,
              std::istream& in, std::ostream& out, std::ostream& err) {
  Session session(flags, in);
  if (absl::Status s = session.Open(); !s.ok()) return InputError(err, s);
  std::ofstream csv;
  ReplayOptions options;
  options.check = check == "none" ? ReplayCheck::kNone : ReplayCheck::kLoops;
  options.format = session.format();
  options.violations_out = &out;
  options.flush_every_op = FlushEveryOp();
  if (!flags.metrics_out.empty()) {
    csv.open(flags.metrics_out);
    if (!csv) {
      return InputError(err, absl::NotFoundError(
                                 absl::StrCat("cannot write ", flags.metrics_out)));
    }
    options.metrics_csv = &csv;
  }
  absl::StatusOr<ReplayMetrics> metrics =
      Replay(session.reader(), session.engine(), options);
  if (!metrics.ok()) return InputError(err, metrics.status());
  const ReplaySummary summary = metrics->Summarize();
  out << FormatSummary(summary, session.format());
  if (session.format() == ReportFormat::kMachine) out << "\n";
  return summary.violations > 0 ? kExitViolations : kExitOk;
}

int RunStats(const CommonFlags& flags, std::istream& in, std::ostream& out,
             std::ostream& err) {
  Session session(flags, in);
  if (absl::Status s = session.Open(); !s.ok()) return InputError(err, s);
  ReplayOptions options;
  options.check = ReplayCheck::kNone;
  absl::StatusOr<ReplayMetrics> metrics =
      Replay(session.reader(), session.engine(), options);
  if (!metrics.ok()) return InputError(err, metrics.status());
  const ReplaySummary s = metrics->Summarize();
  const Engine& engine = session.engine();
  if (session.format() == ReportFormat::kMachine) {
    out << absl::StrFormat(
        "{\"type\":\"stats\",\"ops\":%d,\"total_atoms\":%d,\"max_rules\":%d,"
        "\"rules\":%d,\"nodes\":%d,\"links\":%d,\"memory_bytes\":%d,"
        "\"median_us\":%.3f,\"mean_us\":%.3f,\"pct_under_250us\":%.3f,"
        "\"priority_conflicts\":%d}\n",
        s.ops, engine.atoms().atom_count(), s.max_rules, engine.rule_count(),
        engine.node_count() - 1, engine.link_count(),
        engine.MemoryEstimateBytes(), s.median_micros, s.mean_micros,
        s.pct_under_250us, s.priority_conflicts);
    return kExitOk;
  }
  out << absl::StrFormat(
      "ops: %d\n"
      "total atoms: %d\n"
      "max rules: %d\n"
      "rules: %d\n"
      "nodes: %d\n"
      "links: %d\n"
      "memory bytes: %d\n"
      "median us/op: %.3f\n"
      "mean us/op: %.3f\n"
      "pct < 250us: %.2f\n"
      "priority conflicts: %d\n",
      s.ops, engine.atoms().atom_count(), s.max_rules, engine.rule_count(),
      engine.node_count() - 1, engine.link_count(),
      engine.MemoryEstimateBytes(), s.median_micros, s.mean_micros,
      s.pct_under_250us, s.priority_conflicts);
  return kExitOk;
}

absl::StatusOr<Link> ResolveLink(const Engine& engine, const std::string& text) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("link '", text, "' is not of the form src:dst"));
  }
  std::optional<NodeId> a = engine.FindNode(text.substr(0, colon));
  std::optional<NodeId> b = engine.FindNode(text.substr(colon + 1));
  if (!a.has_value() || !b.has_value() || !engine.FindLink({*a, *b})) {
    return absl::NotFoundError(absl::StrCat("unknown link ", text));
  }
  return Link{*a, *b};
}

struct WhatIfFlags {
  std::vector<std::string> fail;
  bool all_single = false;
  bool all_pairs = false;
  std::string check = "report_only";
  std::string plane = "adds";
};

int RunWhatIf(const CommonFlags& flags, const WhatIfFlags& w, std::istream& in,
              std::ostream& out, std::ostream& err) {
  Session session(flags, in);
  if (absl::Status s = session.Open(); !s.ok()) return InputError(err, s);
  if (absl::Status s = session.LoadPlane(w.plane == "adds"); !s.ok()) {
    return InputError(err, s);
  }
  Engine& engine = session.engine();
  std::vector<std::vector<Link>> queries;
  if (!w.fail.empty()) {
    std::vector<Link> set;
    for (const std::string& text : w.fail) {
      absl::StatusOr<Link> link = ResolveLink(engine, text);
      if (!link.ok()) return InputError(err, link.status());
      set.push_back(*link);
    }
    queries.push_back(std::move(set));
  } else {
    std::vector<Link> links;
    for (LinkId l = 0; l < engine.link_count(); ++l) {
      if (engine.link(l).target != kDropNode) links.push_back(engine.link(l));
    }
    if (w.all_single) {
      for (const Link& l : links) queries.push_back({l});
    } else {
      for (size_t i = 0; i < links.size(); ++i) {
        for (size_t j = i + 1; j < links.size(); ++j) {
          queries.push_back({links[i], links[j]});
        }
      }
    }
  }
  FailureCheck check = FailureCheck::kReportOnly;
  if (w.check == "loops") check = FailureCheck::kLoops;
  if (w.check == "blackholes") check = FailureCheck::kBlackholes;

  using Clock = std::chrono::steady_clock;
  double total_micros = 0;
  bool violations = false;
  for (const std::vector<Link>& q : queries) {
    const auto start = Clock::now();
    FailureReport report;
    if (check == FailureCheck::kReportOnly) {
      std::vector<LinkId> ids;
      for (const Link& l : q) ids.push_back(*engine.FindLink(l));
      report = ReportAffectedFlows(engine, ids);
    } else {
      absl::StatusOr<FailureReport> r = WhatIfFailLinks(engine, q, check);
      if (!r.ok()) return InputError(err, r.status());
      report = *std::move(r);
    }
    total_micros +=
        std::chrono::duration<double, std::micro>(Clock::now() - start).count();
    violations = violations || report.HasViolations();
    out << FormatFailureReport(engine, report, session.format());
  }
  const double average =
      queries.empty() ? 0 : total_micros / static_cast<double>(queries.size());
  if (session.format() == ReportFormat::kMachine) {
    out << absl::StrFormat(
        "{\"type\":\"whatif_summary\",\"queries\":%d,\"average_us\":%.3f}\n",
        queries.size(), average);
  } else {
    out << absl::StrFormat("queries: %d\naverage query us: %.3f\n",
                           queries.size(), average);
  }
  return violations ? kExitViolations : kExitOk;
}

int RunAllPairs(const CommonFlags& flags, const std::string& plane,
                std::istream& in, std::ostream& out, std::ostream& err) {
  Session session(flags, in);
  if (absl::Status s = session.Open(); !s.ok()) return InputError(err, s);
  if (absl::Status s = session.LoadPlane(plane == "adds"); !s.ok()) {
    return InputError(err, s);
  }
  const Engine& engine = session.engine();
  const ClosureMatrix closure = AllPairsClosure(engine);
  const bool machine = session.format() == ReportFormat::kMachine;
  auto join = [](const std::vector<Interval>& ivs, const char* sep) {
    return absl::StrJoin(ivs, sep, [](std::string* o, const Interval& iv) {
      o->append(iv.ToString());
    });
  };
  for (NodeId i = 1; i < closure.size(); ++i) {
    for (NodeId j = 1; j < closure.size(); ++j) {
      const LabelSet& atoms = closure.at(i, j);
      if (atoms.Empty()) continue;
      if (machine) {
        out << engine.NodeName(i) << " " << engine.NodeName(j) << " "
            << join(IntervalsOf(engine.atoms(), atoms, false), ",") << "\n";
      } else {
        out << engine.NodeName(i) << " -> " << engine.NodeName(j) << ": "
            << join(IntervalsOf(engine.atoms(), atoms), " ") << "\n";
      }
    }
  }
  return kExitOk;
}

struct GenFlags {
  std::string prefixes;
  size_t synthetic = 0;
  std::string assign;
  std::string priority = "random";
  std::string removal = "random_order";
  std::string out;
};

int RunGen(const CommonFlags& flags, const GenFlags& g, std::ostream& out,
           std::ostream& err) {
  absl::StatusOr<AddressSpace> space = AddressSpace::Create(flags.k);
  if (!space.ok()) return InputError(err, space.status());
  std::ifstream topo_file(flags.topo);
  if (!topo_file) {
    return InputError(err, absl::NotFoundError(absl::StrCat("cannot open ", flags.topo)));
  }
  absl::StatusOr<Topology> topo = ParseTopology(topo_file);
  if (!topo.ok()) return InputError(err, topo.status());
  if (topo->ComponentCount() > 1) {
    err << "warning: topology has " << topo->ComponentCount()
        << " connected components\n";
  }

  std::vector<Route> routes;
  if (!g.assign.empty()) {
    std::ifstream file(g.assign);
    if (!file) {
      return InputError(err, absl::NotFoundError(absl::StrCat("cannot open ", g.assign)));
    }
    absl::StatusOr<std::vector<Route>> r = ParseAssignment(file, *topo, *space);
    if (!r.ok()) return InputError(err, r.status());
    routes = *std::move(r);
  } else {
    std::vector<IpPrefix> prefixes;
    if (!g.prefixes.empty()) {
      std::ifstream file(g.prefixes);
      if (!file) {
        return InputError(err, absl::NotFoundError(absl::StrCat("cannot open ", g.prefixes)));
      }
      absl::StatusOr<std::vector<IpPrefix>> p = ParsePrefixList(file, *space);
      if (!p.ok()) return InputError(err, p.status());
      prefixes = *std::move(p);
    } else {
      if (flags.k != 32) {
        return InputError(err, absl::InvalidArgumentError(
                                   "--synthetic requires --k 32"));
      }
      prefixes = SyntheticPrefixes(g.synthetic, flags.seed);
    }
    routes = AssignRoundRobin(*topo, prefixes);
  }

  GeneratorOptions options;
  options.seed = flags.seed;
  options.priority = g.priority == "longest_prefix"
                         ? PriorityPolicy::kLongestPrefix
                         : PriorityPolicy::kRandom;
  options.removal = g.removal == "none" ? RemovalPolicy::kNone
                                        : RemovalPolicy::kRandomOrder;
  absl::StatusOr<GeneratedDataset> data = GenerateDataset(*topo, routes, options);
  if (!data.ok()) return InputError(err, data.status());

  std::ofstream file;
  std::ostream* sink = &out;
  if (!g.out.empty() && g.out != "-") {
    file.open(g.out);
    if (!file) {
      return InputError(err, absl::NotFoundError(absl::StrCat("cannot write ", g.out)));
    }
    sink = &file;
  }
  WriteTrace(*sink, data->ops, *space);
  sink->flush();
  err << "rules: " << data->rules << ", ops: " << data->ops.size()
      << ", distinct prefixes: " << data->distinct_prefixes
      << ", unreachable: " << data->unreachable << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err) {
  CLI::App app{"Incremental data plane checker", "deltanet"};
  app.require_subcommand(1);

  CommonFlags replay_flags, stats_flags, whatif_flags, allpairs_flags, gen_flags;
  std::string replay_check = "loops";
  CLI::App* replay = app.add_subcommand("replay", "Apply a trace, checking each op");
  AddInputFlags(replay, replay_flags);
  replay->add_option("--check", replay_check, "Per-op check")
      ->check(CLI::IsMember({"none", "loops"}));
  replay->add_option("--metrics-out", replay_flags.metrics_out,
                     "Write per-op metrics CSV");

  CLI::App* stats = app.add_subcommand("stats", "Replay without checks and summarize");
  AddInputFlags(stats, stats_flags);

  WhatIfFlags w;
  CLI::App* whatif = app.add_subcommand("whatif", "Hypothetical link failures");
  AddInputFlags(whatif, whatif_flags);
  auto* fail = whatif->add_option("--fail", w.fail, "Failed link src:dst (repeatable)");
  auto* single = whatif->add_flag("--all-single-links", w.all_single,
                                  "Fail each link in turn");
  auto* pairs = whatif->add_flag("--all-link-pairs", w.all_pairs,
                                 "Fail every unordered pair of links together");
  fail->excludes(single)->excludes(pairs);
  single->excludes(pairs);
  whatif->add_option("--check", w.check, "What to compute per failure")
      ->check(CLI::IsMember({"report_only", "loops", "blackholes"}));
  whatif->add_option("--plane", w.plane, "Which ops build the plane")
      ->check(CLI::IsMember({"adds", "final"}));

  std::string allpairs_plane = "adds";
  CLI::App* allpairs = app.add_subcommand("allpairs", "All-pairs reachable atoms");
  AddInputFlags(allpairs, allpairs_flags);
  allpairs->add_option("--plane", allpairs_plane, "Which ops build the plane")
      ->check(CLI::IsMember({"adds", "final"}));

  GenFlags g;
  CLI::App* gen = app.add_subcommand("gen", "Generate a shortest-path dataset");
  gen->add_option("--topo", gen_flags.topo, "Topology file")->required();
  gen->add_option("--k", gen_flags.k, "Address width in bits")
      ->check(CLI::Range(1, 128));
  gen->add_option("--seed", gen_flags.seed, "Random seed");
  auto* prefixes = gen->add_option("--prefixes", g.prefixes, "Prefix list file");
  auto* synthetic = gen->add_option("--synthetic", g.synthetic,
                                    "Number of synthetic IPv4 prefixes");
  auto* assign = gen->add_option("--assign", g.assign,
                                 "Prefix to destination assignment file");
  prefixes->excludes(synthetic)->excludes(assign);
  synthetic->excludes(assign);
  gen->add_option("--priority", g.priority, "Priority policy")
      ->check(CLI::IsMember({"random", "longest_prefix"}));
  gen->add_option("--removal", g.removal, "Removal policy")
      ->check(CLI::IsMember({"none", "random_order"}));
  gen->add_option("--out", g.out, "Output trace file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
    if (gen->parsed() && g.prefixes.empty() && g.assign.empty() &&
        g.synthetic == 0) {
      throw CLI::RequiredError("one of --prefixes, --synthetic, --assign");
    }
    if (whatif->parsed() && w.fail.empty() && !w.all_single && !w.all_pairs) {
      throw CLI::RequiredError(
          "one of --fail, --all-single-links, --all-link-pairs");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  if (replay->parsed()) return RunReplay(replay_flags, replay_check, in, out, err);
  if (stats->parsed()) return RunStats(stats_flags, in, out, err);
  if (whatif->parsed()) return RunWhatIf(whatif_flags, w, in, out, err);
  if (allpairs->parsed()) return RunAllPairs(allpairs_flags, allpairs_plane, in, out, err);
  return RunGen(gen_flags, g, out, err);
}

}  // namespace deltanet
