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

#include "deltanet/analysis.h"

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "testing/random_trace.h"

namespace deltanet {
namespace {

using ::testing::IsEmpty;
using ::testing::SizeIs;

AddressSpace Bits(int k) { return *AddressSpace::Create(k); }

class AnalysisTest : public ::testing::Test {
 protected:
  AnalysisTest() : engine_(Bits(8)), sim_(Bits(8)) {}

  // Applies the op to both the engine and the simulator.
  DeltaGraph Add(RuleId id, const std::string& src, const std::string& dst, Priority prio,
                 const char* prefix) {
    TraceOp op = TraceOp::Add(id, src, dst, prio,
                              *ParsePrefix(prefix, engine_.space()));
    last_changes_ = *sim_.Apply(op);
    absl::StatusOr<DeltaGraph> d = ApplyOp(engine_, op);
    EXPECT_TRUE(d.ok()) << d.status();
    return *d;
  }

  NodeId N(absl::string_view name) { return *engine_.FindNode(name); }

  Engine engine_;
  AddressSim sim_;
  std::vector<AddressSim::Change> last_changes_;
};

TEST_F(AnalysisTest, ClosingEdgeReportsThreeCycle) {
  Add(1, "s1", "s2", 1, "0/4");
  Add(2, "s2", "s3", 1, "0/4");
  EXPECT_THAT(CheckLoops(engine_, Add(3, "s3", "x", 1, "0/5")), IsEmpty());
  const DeltaGraph d = Add(4, "s3", "s1", 2, "4/6");
  const std::vector<LoopReport> loops = CheckLoops(engine_, d);
  ASSERT_THAT(loops, SizeIs(1));
  EXPECT_EQ(loops[0].cycle,
            (std::vector<NodeId>{N("s1"), N("s2"), N("s3"), N("s1")}));
  EXPECT_EQ(loops[0].witness, std::vector<Interval>{MakeInterval(4, 8)});
  EXPECT_EQ(testing::EngineLoops(engine_, loops),
            testing::SimLoops(sim_, last_changes_));
}

TEST_F(AnalysisTest, AcyclicGraphHasNoLoops) {
  Add(1, "s1", "s2", 1, "0/4");
  const DeltaGraph d = Add(2, "s2", "s3", 1, "0/4");
  EXPECT_THAT(CheckLoops(engine_, d), IsEmpty());
}

TEST_F(AnalysisTest, DisjointLabelsAroundCycleAreNotALoop) {
  Add(1, "s1", "s2", 1, "0/6");
  Add(2, "s2", "s3", 1, "4/6");
  const DeltaGraph d = Add(3, "s3", "s1", 1, "0/5");
  EXPECT_THAT(CheckLoops(engine_, d), IsEmpty());
  EXPECT_THAT(testing::SimLoops(sim_, last_changes_), IsEmpty());
}

TEST_F(AnalysisTest, LoopCheckMatchesSimulatorOnRandomOps) {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    testing::RandomTraceOptions o;
    o.seed = seed;
    o.ops = 300;
    o.nodes = 4;
    Engine engine(Bits(8));
    AddressSim sim(Bits(8));
    for (const TraceOp& op : testing::RandomTrace(o)) {
      absl::StatusOr<std::vector<AddressSim::Change>> changes = sim.Apply(op);
      absl::StatusOr<DeltaGraph> d = ApplyOp(engine, op);
      ASSERT_TRUE(changes.ok() && d.ok());
      ASSERT_EQ(testing::EngineLoops(engine, CheckLoops(engine, *d)),
                testing::SimLoops(sim, *changes))
          << "seed " << seed << " op " << FormatTraceOp(op, engine.space());
    }
  }
}

TEST_F(AnalysisTest, ReachableAlongChain) {
  Add(1, "s1", "s2", 1, "0/7");
  Add(2, "s2", "s3", 1, "0/6");
  absl::StatusOr<LabelSet> r = ReachableAtoms(engine_, N("s1"), N("s3"));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(IntervalsOf(engine_.atoms(), *r),
            std::vector<Interval>{MakeInterval(0, 2)});
  EXPECT_EQ(*ReachableAtoms(engine_, N("s2"), N("s2")), engine_.AllAtoms());
  EXPECT_FALSE(ReachableAtoms(engine_, 0, 77).ok());
  const ClosureMatrix closure = AllPairsClosure(engine_);
  EXPECT_EQ(closure.at(N("s1"), N("s3")), *r);
  EXPECT_TRUE(closure.at(N("s3"), N("s1")).Empty());
}

TEST_F(AnalysisTest, EmptyGraphClosureIsEmpty) {
  engine_.InternNode("a");
  engine_.InternNode("b");
  const ClosureMatrix closure = AllPairsClosure(engine_);
  for (NodeId i = 0; i < closure.size(); ++i) {
    for (NodeId j = 0; j < closure.size(); ++j) {
      EXPECT_TRUE(closure.at(i, j).Empty());
    }
  }
}

TEST(AnalysisRandomTest, ReachabilityAndClosureMatchSimulator) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    testing::RandomTraceOptions o;
    o.seed = seed;
    o.ops = 120;
    o.nodes = 8;
    const std::vector<TraceOp> ops = testing::RandomTrace(o);
    Engine engine(Bits(8));
    AddressSim sim(Bits(8));
    ASSERT_TRUE(testing::ApplyAll(engine, ops).ok());
    ASSERT_TRUE(testing::ApplyAll(sim, ops).ok());
    const ClosureMatrix closure = AllPairsClosure(engine);
    EXPECT_EQ(testing::CompareClosure(engine, closure, sim), "")
        << "seed " << seed;
    for (NodeId i = 1; i < engine.node_count(); ++i) {
      for (NodeId j = 0; j < engine.node_count(); ++j) {
        if (i == j) continue;
        const LabelSet reach = *ReachableAtoms(engine, i, j);
        // Walk every address from i and see whether it passes j.
        for (uint64_t a = 0; a < 256; ++a) {
          const AddressSim::Walk w =
              sim.Forward(*sim.FindNode(engine.NodeName(i)), Address(a));
          std::optional<int> sj = sim.FindNode(engine.NodeName(j));
          const bool want = sj.has_value() &&
                            std::find(w.path.begin() + 1, w.path.end(), *sj) !=
                                w.path.end();
          ASSERT_EQ(reach.Test(engine.atoms().AtomContaining(Address(a))), want)
              << engine.NodeName(i) << "->" << engine.NodeName(j) << " @" << a;
        }
      }
    }
  }
}

class WhatIfTest : public AnalysisTest {
 protected:
  Link L(absl::string_view a, absl::string_view b) { return Link{N(a), N(b)}; }
};

TEST_F(WhatIfTest, EmptyLabelLinkHasNoAffectedAtoms) {
  Add(1, "s1", "s2", 2, "0/4");
  Add(2, "s1", "s3", 1, "0/4");
  for (FailureCheck check : {FailureCheck::kReportOnly, FailureCheck::kLoops,
                             FailureCheck::kBlackholes}) {
    absl::StatusOr<FailureReport> r =
        WhatIfFailLinks(engine_, {L("s1", "s3")}, check);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r->affected.Empty());
    EXPECT_THAT(r->outcomes, IsEmpty());
    EXPECT_FALSE(r->HasViolations());
  }
}

TEST_F(WhatIfTest, BackupRuleReroutes) {
  Add(1, "s1", "s2", 5, "0/4");
  Add(2, "s1", "s3", 1, "0/4");
  Add(3, "s2", "d", 1, "0/4");
  Add(4, "s3", "d", 1, "0/4");
  const std::string labels = engine_.DumpState();
  const std::string owners = engine_.DumpOwners();
  absl::StatusOr<FailureReport> r =
      WhatIfFailLinks(engine_, {L("s1", "s2")}, FailureCheck::kBlackholes);
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_THAT(r->outcomes, SizeIs(1));
  EXPECT_EQ(r->outcomes[0].verdict, FailureVerdict::kRerouted);
  EXPECT_EQ(r->outcomes[0].path,
            (std::vector<NodeId>{N("s1"), N("s3"), N("d")}));
  EXPECT_FALSE(r->HasViolations());
  EXPECT_EQ(engine_.DumpState(), labels);
  EXPECT_EQ(engine_.DumpOwners(), owners);
  EXPECT_TRUE(engine_.CheckCoherence().ok());
}

TEST_F(WhatIfTest, OnlyEgressBlackholes) {
  Add(1, "s1", "s2", 5, "0/4");
  Add(2, "s2", "d", 1, "0/4");
  absl::StatusOr<FailureReport> r =
      WhatIfFailLinks(engine_, {L("s1", "s2")}, FailureCheck::kBlackholes);
  ASSERT_TRUE(r.ok());
  ASSERT_THAT(r->outcomes, SizeIs(1));
  EXPECT_EQ(r->outcomes[0].verdict, FailureVerdict::kBlackholed);
  EXPECT_TRUE(r->HasViolations());
  // The loop check does not count blackholes.
  r = WhatIfFailLinks(engine_, {L("s1", "s2")}, FailureCheck::kLoops);
  ASSERT_TRUE(r.ok());
  EXPECT_FALSE(r->HasViolations());
}

TEST_F(WhatIfTest, FailureExposesLoop) {
  Add(1, "s1", "s2", 5, "0/4");
  Add(2, "s1", "s3", 1, "0/4");
  Add(3, "s3", "s1", 1, "0/4");
  absl::StatusOr<FailureReport> r =
      WhatIfFailLinks(engine_, {L("s1", "s2")}, FailureCheck::kLoops);
  ASSERT_TRUE(r.ok());
  ASSERT_THAT(r->loops, SizeIs(1));
  EXPECT_EQ(r->loops[0].cycle,
            (std::vector<NodeId>{N("s1"), N("s3"), N("s1")}));
  ASSERT_THAT(r->outcomes, SizeIs(1));
  EXPECT_EQ(r->outcomes[0].verdict, FailureVerdict::kLooping);
  EXPECT_TRUE(r->HasViolations());
  EXPECT_THAT(CheckLoops(engine_, DeltaGraph{}), IsEmpty());
}

TEST_F(WhatIfTest, ReportOnlyListsFlows) {
  Add(1, "s1", "s2", 1, "0/4");
  Add(2, "s2", "s3", 1, "0/5");
  const LinkId failed = *engine_.FindLink(L("s1", "s2"));
  const FailureReport r = ReportAffectedFlows(engine_, {failed});
  EXPECT_EQ(r.affected, engine_.label(failed));
  ASSERT_THAT(r.flows, SizeIs(2));
  EXPECT_EQ(IntervalsOf(engine_.atoms(), r.flows[1].atoms),
            std::vector<Interval>{MakeInterval(0, 8)});
}

TEST_F(WhatIfTest, UnknownLinkIsNotFound) {
  Add(1, "s1", "s2", 1, "0/4");
  EXPECT_EQ(WhatIfFailLinks(engine_, {L("s2", "s1")}, FailureCheck::kLoops)
                .status()
                .code(),
            absl::StatusCode::kNotFound);
}

TEST(WhatIfRandomTest, StateUnchangedAndAffectedMatchesLabel) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    testing::RandomTraceOptions o;
    o.seed = seed;
    o.ops = 200;
    Engine engine(Bits(8));
    ASSERT_TRUE(testing::ApplyAll(engine, testing::RandomTrace(o)).ok());
    const std::string labels = engine.DumpState();
    const std::string owners = engine.DumpOwners();
    for (LinkId l = 0; l < engine.link_count(); ++l) {
      for (FailureCheck check : {FailureCheck::kLoops, FailureCheck::kBlackholes}) {
        absl::StatusOr<FailureReport> r =
            WhatIfFailLinks(engine, {engine.link(l)}, check);
        ASSERT_TRUE(r.ok());
        EXPECT_EQ(r->affected, engine.label(l));
        LabelSet covered;
        for (const FailureOutcome& out : r->outcomes) covered |= out.atoms;
        EXPECT_EQ(covered, engine.label(l));
      }
    }
    EXPECT_EQ(engine.DumpState(), labels);
    EXPECT_EQ(engine.DumpOwners(), owners);
  }
}

}  // namespace
}  // namespace deltanet
