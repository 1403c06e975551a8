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

#include "deltanet/engine.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "testing/random_trace.h"

namespace deltanet {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

AddressSpace Bits(int k) { return *AddressSpace::Create(k); }

class EngineFixture : public ::testing::Test {
 protected:
  explicit EngineFixture(int bits = 4) : engine_(Bits(bits)) {}

  DeltaGraph Insert(RuleId id, absl::string_view src, absl::string_view dst,
                    Priority prio, uint64_t lo, uint64_t hi) {
    Rule r{id, {engine_.InternNode(src), engine_.InternNode(dst)}, prio,
           MakeInterval(lo, hi)};
    absl::StatusOr<DeltaGraph> d = engine_.InsertRule(r);
    EXPECT_TRUE(d.ok()) << d.status();
    return d.ok() ? *d : DeltaGraph{};
  }

  DeltaGraph Remove(RuleId id) {
    absl::StatusOr<DeltaGraph> d = engine_.RemoveRule(id);
    EXPECT_TRUE(d.ok()) << d.status();
    return d.ok() ? *d : DeltaGraph{};
  }

  std::vector<AtomId> Label(absl::string_view src, absl::string_view dst) {
    absl::StatusOr<LabelSet> l =
        engine_.LabelOf({*engine_.FindNode(src), *engine_.FindNode(dst)});
    EXPECT_TRUE(l.ok()) << l.status();
    return l.ok() ? l->ToVector() : std::vector<AtomId>{};
  }

  const LinkDelta* DeltaOn(const DeltaGraph& d, absl::string_view src,
                           absl::string_view dst) {
    std::optional<LinkId> id =
        engine_.FindLink({*engine_.FindNode(src), *engine_.FindNode(dst)});
    for (const LinkDelta& ld : d.links) {
      if (id.has_value() && ld.link == *id) return &ld;
    }
    return nullptr;
  }

  Engine engine_;
};

// r_L forwards [0:16) from s to t; r_H drops [10:12).
class TwoRuleTest : public EngineFixture {
 protected:
  void SetUp() override {
    Insert(1, "s", "t", 1, 0, 16);
    Insert(2, "s", kDropNodeName, 3, 10, 12);
  }
};

TEST_F(EngineFixture, SoleRuleOwnsItsAtoms) {
  engine_ = Engine(Bits(8));
  Insert(10, "s", "t", 1, 10, 12);
  DeltaGraph d = Insert(11, "s", "t", 0, 0, 16);
  // [0:10) and [12:16) are new to the link; [10:12) was already there.
  ASSERT_EQ(d.links.size(), 1u);
  EXPECT_THAT(d.links[0].removed, IsEmpty());
  EXPECT_EQ(Label("s", "t"), (std::vector<AtomId>{0, 1, 2}));
}

TEST_F(TwoRuleTest, ShadowedAtomMovesToDrop) {
  EXPECT_EQ(engine_.atoms().atom_count(), 3u);
  EXPECT_EQ(Label("s", kDropNodeName), std::vector<AtomId>{1});
  EXPECT_EQ(Label("s", "t"), (std::vector<AtomId>{0, 2}));
  EXPECT_EQ(engine_.DumpState(),
            "s DROP [10:12)\n"
            "s t [0:10) [12:16)\n");
  EXPECT_TRUE(engine_.CheckCoherence().ok());
}

TEST_F(TwoRuleTest, MiddlePriorityRuleSplitsOnce) {
  DeltaGraph d = Insert(3, "s", "u", 2, 8, 12);
  ASSERT_EQ(d.splits.size(), 1u);
  EXPECT_EQ(d.splits[0].old_atom, 0u);
  const AtomId fresh = d.splits[0].new_atom;
  EXPECT_EQ(*engine_.atoms().IntervalOf(0), MakeInterval(0, 8));
  EXPECT_EQ(*engine_.atoms().IntervalOf(fresh), MakeInterval(8, 10));
  EXPECT_EQ(Label("s", "u"), std::vector<AtomId>{fresh});
  EXPECT_EQ(Label("s", kDropNodeName), std::vector<AtomId>{1});
  EXPECT_EQ(Label("s", "t"), (std::vector<AtomId>{0, 2}));
  // The split copy on s->t is not a change; only the move is.
  const LinkDelta* f = DeltaOn(d, "s", "t");
  ASSERT_NE(f, nullptr);
  EXPECT_THAT(f->added, IsEmpty());
  EXPECT_THAT(f->removed, ElementsAre(fresh));
  const LinkDelta* f2 = DeltaOn(d, "s", "u");
  ASSERT_NE(f2, nullptr);
  EXPECT_THAT(f2->added, ElementsAre(fresh));
  EXPECT_EQ(DeltaOn(d, "s", kDropNodeName), nullptr);
}

TEST_F(TwoRuleTest, RemovingHighRuleTransfersOwnership) {
  DeltaGraph d = Remove(2);
  EXPECT_EQ(Label("s", "t"), (std::vector<AtomId>{0, 1, 2}));
  EXPECT_THAT(Label("s", kDropNodeName), IsEmpty());
  EXPECT_EQ(d.links.size(), 2u);
  EXPECT_TRUE(engine_.CheckCoherence().ok());
}

TEST_F(TwoRuleTest, RemovingLastRuleAtNodeEmptiesLabel) {
  Remove(2);
  Remove(1);
  EXPECT_THAT(Label("s", "t"), IsEmpty());
  EXPECT_THAT(engine_.OwnersAt(0, *engine_.FindNode("s")), IsEmpty());
}

TEST_F(TwoRuleTest, UnusedLinkHasEmptyLabel) {
  engine_.InternNode("z");
  EXPECT_THAT(Label("t", "z"), IsEmpty());
  EXPECT_EQ(engine_.LabelOf({0, 999}).status().code(),
            absl::StatusCode::kNotFound);
}

TEST_F(TwoRuleTest, OwnersOrderedByPriority) {
  const NodeId s = *engine_.FindNode("s");
  EXPECT_THAT(engine_.OwnersAt(1, s), ElementsAre(2, 1));
  EXPECT_THAT(engine_.OwnersAt(0, s), ElementsAre(1));
  EXPECT_EQ(engine_.OwningLink(1, s),
            engine_.FindLink({s, kDropNode}));
}

TEST_F(EngineFixture, HighPriorityRuleTakesOverThreeAtoms) {
  engine_ = Engine(Bits(8));
  Insert(1, "s1", "s2", 1, 0, 16);
  Insert(2, "s2", "s3", 1, 12, 16);
  Insert(3, "s3", "s1", 1, 14, 16);
  const size_t before = engine_.atoms().atom_count();
  DeltaGraph d = Insert(4, "s1", "s4", 5, 8, 16);
  EXPECT_EQ(engine_.atoms().atom_count(), before + 1);
  ASSERT_EQ(d.splits.size(), 1u);
  EXPECT_EQ(Label("s1", "s4").size(), 3u);
  EXPECT_EQ(Label("s1", "s2").size(), 1u);
  EXPECT_EQ(engine_.DumpState(true),
            "s1 s2 [0:8)\n"
            "s1 s4 [8:16)\n"
            "s2 s3 [12:16)\n"
            "s3 s1 [14:16)\n");
  const LinkDelta* moved = DeltaOn(d, "s1", "s2");
  ASSERT_NE(moved, nullptr);
  EXPECT_EQ(moved->removed.size(), 3u);
}

TEST_F(EngineFixture, Errors) {
  Insert(1, "a", "b", 1, 0, 8);
  Rule dup{1, {engine_.InternNode("a"), engine_.InternNode("c")}, 1,
           MakeInterval(0, 8)};
  EXPECT_EQ(engine_.InsertRule(dup).status().code(),
            absl::StatusCode::kAlreadyExists);
  Rule bad{2, dup.link, 1, MakeInterval(3, 3)};
  EXPECT_EQ(engine_.InsertRule(bad).status().code(),
            absl::StatusCode::kInvalidArgument);
  bad.match = MakeInterval(0, 17);
  EXPECT_EQ(engine_.InsertRule(bad).status().code(),
            absl::StatusCode::kInvalidArgument);
  Rule self{3, {dup.link.source, dup.link.source}, 1, MakeInterval(0, 8)};
  EXPECT_EQ(engine_.InsertRule(self).status().code(),
            absl::StatusCode::kInvalidArgument);
  Rule from_drop{4, {kDropNode, dup.link.source}, 1, MakeInterval(0, 8)};
  EXPECT_EQ(engine_.InsertRule(from_drop).status().code(),
            absl::StatusCode::kInvalidArgument);
  Rule ghost{5, {dup.link.source, 4242}, 1, MakeInterval(0, 8)};
  EXPECT_EQ(engine_.InsertRule(ghost).status().code(),
            absl::StatusCode::kNotFound);
  EXPECT_EQ(engine_.RemoveRule(99).status().code(), absl::StatusCode::kNotFound);
  EXPECT_EQ(engine_.rule_count(), 1u);
  EXPECT_TRUE(engine_.CheckCoherence().ok());
}

TEST_F(EngineFixture, EqualPriorityTieBreaksByLargerId) {
  Insert(1, "a", "b", 4, 0, 16);
  DeltaGraph d = Insert(2, "a", "c", 4, 0, 8);
  EXPECT_TRUE(d.priority_conflict);
  EXPECT_EQ(Label("a", "c").size(), 1u);
  EXPECT_TRUE(Insert(3, "a", "c", 4, 8, 16).priority_conflict);
  EXPECT_FALSE(Insert(4, "b", "c", 4, 0, 16).priority_conflict);
}

TEST_F(EngineFixture, DeltaMergeCancels) {
  Insert(1, "a", "b", 1, 0, 16);
  DeltaGraph total = Insert(2, "a", "c", 2, 0, 8);
  total.Merge(Remove(2));
  EXPECT_TRUE(total.empty());
}

TEST(EngineStateTest, CheckpointRestore) {
  testing::RandomTraceOptions o;
  o.seed = 5;
  Engine engine(Bits(8));
  ASSERT_TRUE(testing::ApplyAll(engine, testing::RandomRules(30, o)).ok());
  const std::string before = engine.DumpState();
  const Engine::Snapshot snap = engine.Checkpoint();
  o.seed = 6;
  std::vector<TraceOp> more = testing::RandomRules(100, o);
  for (TraceOp& op : more) op.id += 1000;
  ASSERT_TRUE(testing::ApplyAll(engine, more).ok());
  EXPECT_NE(engine.DumpState(), before);
  engine.Restore(snap);
  EXPECT_EQ(engine.DumpState(), before);
  engine.Restore(snap);
  EXPECT_EQ(engine.DumpState(), before);
  EXPECT_EQ(engine.rule_count(), 30u);
  EXPECT_TRUE(engine.CheckCoherence().ok());
}

TEST(EngineStateTest, RestoreEmptyCheckpoint) {
  Engine engine(Bits(8));
  const Engine::Snapshot snap = engine.Checkpoint();
  testing::RandomTraceOptions o;
  o.ops = 300;
  ASSERT_TRUE(testing::ApplyAll(engine, testing::RandomTrace(o)).ok());
  engine.Restore(snap);
  EXPECT_EQ(engine.DumpState(), "");
  EXPECT_EQ(engine.rule_count(), 0u);
}

TEST(EngineStateTest, InsertThenRemoveRestoresLabels) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    testing::RandomTraceOptions o;
    o.seed = 100 + round;
    o.ops = 200;
    Engine engine(Bits(8));
    ASSERT_TRUE(testing::ApplyAll(engine, testing::RandomTrace(o)).ok());
    const std::string labels = engine.DumpState(true);
    const std::string owners = engine.DumpOwners();
    o.seed = 9000 + round;
    TraceOp extra = testing::RandomRules(1, o)[0];
    extra.id = 1u << 30;
    ASSERT_TRUE(ApplyOp(engine, extra).ok());
    ASSERT_TRUE(engine.RemoveRule(extra.id).ok());
    EXPECT_EQ(engine.DumpState(true), labels);
    EXPECT_EQ(engine.DumpOwners(), owners);
    EXPECT_TRUE(engine.CheckCoherence().ok());
  }
}

TEST(EngineStateTest, CoherentAfterRandomChurn) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    testing::RandomTraceOptions o;
    o.seed = seed;
    o.ops = 500;
    Engine engine(Bits(8));
    ASSERT_TRUE(testing::ApplyAll(engine, testing::RandomTrace(o)).ok());
    EXPECT_TRUE(engine.CheckCoherence().ok()) << "seed " << seed;
  }
}

TEST(EngineStateTest, MemoryEstimateGrows) {
  testing::RandomTraceOptions o;
  Engine engine(Bits(8));
  const size_t empty = engine.MemoryEstimateBytes();
  ASSERT_TRUE(testing::ApplyAll(engine, testing::RandomRules(200, o)).ok());
  EXPECT_GT(engine.MemoryEstimateBytes(), empty);
}

}  // namespace
}  // namespace deltanet
