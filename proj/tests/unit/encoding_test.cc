#include "daycare/encoding.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "daycare/error.h"
#include "daycare/stability.h"
#include "support/fixtures.h"
#include "support/random_market.h"
#include "support/reference.h"

namespace daycare {
namespace {

using testing::LoadInstance;

TEST(Encode, ExampleFourStructure) {
  const Instance instance = LoadInstance("example4.json");
  const EncodedModel model = Encode(instance);
  ASSERT_EQ(model.num_families(), 2);
  ASSERT_EQ(model.blocks[1].size(), 2u);
  // f2's first tuple: c3 at d1 competes with the higher-ranked c1.
  const PositionBlock& f2_first = model.blocks[1][0];
  ASSERT_EQ(f2_first.conditions.size(), 1u);
  const GroupCondition& cond = f2_first.conditions[0];
  EXPECT_EQ(cond.daycare, 0);
  EXPECT_EQ(cond.quota, 1);
  EXPECT_EQ(cond.applicants, std::vector<int>{2});
  EXPECT_EQ(cond.higher_priority, std::vector<int>{0});
  EXPECT_EQ(cond.counted, std::vector<int>{model.ChildDaycareVar(0, 0)});
  // f2's second tuple: c3 outranks c2 at d2, so nobody is counted.
  EXPECT_TRUE(model.blocks[1][1].conditions[0].higher_priority.empty());
  // P(c,d) and x[c,d].
  EXPECT_EQ(std::vector<Position>(model.PositionsOf(2, 1).begin(),
                                  model.PositionsOf(2, 1).end()),
            std::vector<Position>{1});
  EXPECT_EQ(model.ChildDaycareVar(0, 1), -1);
  EXPECT_TRUE(model.PositionsOf(0, 1).empty());
}

TEST(Evaluate, ExampleFourObjectives) {
  const Instance instance = LoadInstance("example4.json");
  const EncodedModel model = Encode(instance);
  const Evaluation mu1 = Evaluate(model, std::vector<Position>{0, kUnmatched});
  EXPECT_EQ(mu1.blocking, 1);
  EXPECT_EQ(mu1.matched, 2);
  const Evaluation mu2 = Evaluate(model, std::vector<Position>{kUnmatched, 1});
  EXPECT_EQ(mu2.blocking, 1);
  EXPECT_EQ(mu2.matched, 1);
  const Evaluation none =
      Evaluate(model, std::vector<Position>{kUnmatched, kUnmatched});
  EXPECT_EQ(none.matched, 0);
}

TEST(Evaluate, DummyEntriesAreNotMatched) {
  InstanceDocument doc;
  doc.grades = {"0"};
  doc.daycares.push_back({"d1", {{"0", 1}}, {}, {{"c1"}, {"c2"}}});
  doc.families.push_back(
      {"f1", {{"c1", "0"}, {"c2", "0"}}, {}, {{"d1", "d0"}}});
  const Instance instance = ValidateOrThrow(doc);
  const EncodedModel model = Encode(instance);
  const Evaluation eval = Evaluate(model, std::vector<Position>{0});
  EXPECT_EQ(eval.matched, 1);
  EXPECT_EQ(eval.blocking, 0);
}

TEST(Evaluate, ViolationsNameTheirConstraint) {
  const Instance instance = LoadInstance("example4.json");
  const EncodedModel model = Encode(instance);
  try {
    Evaluate(model, std::vector<Position>{0, 0});
    FAIL() << "expected a capacity violation";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.label(), "capacity");
  }
  try {
    Evaluate(model, std::vector<std::vector<int>>{{0}, {1, 1}});
    FAIL() << "expected an at-most-one violation";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.label(), "at-most-one");
  }
  EXPECT_THROW(Evaluate(model, std::vector<Position>{0}), InvalidArgument);
  EXPECT_THROW(Evaluate(model, std::vector<std::vector<int>>{{2}, {0, 0}}),
               InvalidArgument);

  InstanceDocument doc;
  doc.grades = {"0"};
  doc.daycares.push_back({"d1", {{"0", 1}}, {}, {{"c1"}}});
  doc.families.push_back({"f1", {{"c1", "0"}}, {"d1"}, {{"d1"}}});
  const Instance enrolled = ValidateOrThrow(doc);
  try {
    Evaluate(Encode(enrolled), std::vector<Position>{kUnmatched});
    FAIL() << "expected a must-match violation";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.label(), "must-match");
  }
}

TEST(Evaluate, BlockingBoundFlag) {
  const Instance instance = LoadInstance("example4.json");
  EncodeOptions options;
  options.blocking_bound = 0;
  const EncodedModel model = Encode(instance, options);
  EXPECT_FALSE(Evaluate(model, std::vector<Position>{0, kUnmatched})
                   .within_blocking_bound);
  options.blocking_bound = 1;
  EXPECT_TRUE(
      Evaluate(Encode(instance, options), std::vector<Position>{0, kUnmatched})
          .within_blocking_bound);
}

// Every derived value against a direct reading of the market.
class EvaluateProperties : public ::testing::TestWithParam<bool> {};

TEST_P(EvaluateProperties, DerivedValuesMatchReference) {
  std::mt19937_64 rng(GetParam() ? 51 : 52);
  testing::MarketShape shape;
  shape.ties = GetParam();
  for (int trial = 0; trial < 400; ++trial) {
    const Instance instance = testing::RandomInstance(shape, rng);
    const EncodedModel model = Encode(instance);
    const auto positions = testing::RandomFeasiblePositions(instance, rng);
    const Evaluation eval = Evaluate(model, positions);
    const auto assignment = ref::Assignment(instance, positions);
    const auto blocks = ref::AllBlocks(instance, positions);

    EXPECT_EQ(eval.blocking, static_cast<int>(blocks.size()));
    EXPECT_EQ(eval.matched, ref::Matched(instance, positions));
    EXPECT_TRUE(
        IsFeasible(instance, Matching::FromPositions(instance, positions)));

    for (int f = 0; f < instance.num_families(); ++f) {
      int previous_alpha = 0;
      for (Position p = 0; p < instance.family(f).num_positions(); ++p) {
        const PositionBlock& block = model.blocks[f][p];
        const int alpha = eval.values[block.alpha];
        EXPECT_EQ(alpha, positions[f] != kUnmatched && positions[f] <= p);
        EXPECT_GE(alpha, previous_alpha);
        previous_alpha = alpha;
        const bool blocks_here = std::any_of(
            blocks.begin(), blocks.end(),
            [&](const auto& b) { return b.family == f && b.position == p; });
        EXPECT_EQ(eval.values[block.beta], blocks_here ? 1 : 0);
      }
    }
    for (int c = 0; c < instance.num_children(); ++c) {
      const int f = instance.child(c).family;
      const Family& family = instance.family(f);
      const int i = static_cast<int>(
          std::find(family.children.begin(), family.children.end(), c) -
          family.children.begin());
      for (const ChildDaycare& cd : model.child_daycares[c]) {
        const bool selected =
            positions[f] != kUnmatched && assignment[c] == cd.daycare;
        EXPECT_EQ(eval.values[cd.variable], selected ? 1 : 0);
        for (Position p : cd.positions) {
          EXPECT_EQ(family.preferences[p][i], cd.daycare);
        }
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Modes, EvaluateProperties, ::testing::Bool(),
                         [](const auto& info) {
                           return info.param ? "Ties" : "Strict";
                         });

TEST(Evaluate, CapacitySoundness) {
  std::mt19937_64 rng(53);
  int accepted = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Instance instance = testing::RandomInstance({}, rng);
    const EncodedModel model = Encode(instance);
    std::vector<Position> positions(instance.num_families());
    for (int f = 0; f < instance.num_families(); ++f) {
      positions[f] =
          testing::Uniform(rng, 0, instance.family(f).num_positions() - 1);
    }
    bool ok = true;
    try {
      Evaluate(model, positions);
    } catch (const ConstraintViolation& e) {
      EXPECT_EQ(e.label(), "capacity");
      ok = false;
    }
    EXPECT_EQ(ok, ref::Feasible(instance, positions));
    accepted += ok;
  }
  EXPECT_GT(accepted, 0);
}

TEST(Dump, ListsVariablesConstraintsAndObjectives) {
  const Instance instance = LoadInstance("example4.json");
  const EncodedModel model = Encode(instance);
  const std::string dump = model.Dump();
  EXPECT_EQ(dump, Encode(instance).Dump());
  EXPECT_EQ(dump.rfind("model 1\nmode strict\nvariables ", 0), 0u);
  for (const char* needle :
       {"var 0 x[f1,1] family-position 0 1", "beta[f2,2]", "con capacity ",
        "con blocking and beta[f2,1] := !alpha[f2,1] gamma[f2,1]",
        "objective min blocking", "objective max matched"}) {
    EXPECT_NE(dump.find(needle), std::string::npos) << needle << "\n" << dump;
  }
  std::set<std::string> labels;
  for (const Constraint& c : model.constraints) labels.insert(c.label);
  for (const char* label :
       {"child-daycare", "weakly-better", "group-room", "daycare-room",
        "tuple-room", "blocking", "at-most-one", "capacity"}) {
    EXPECT_TRUE(labels.count(label)) << label;
  }
  EncodeOptions bounded;
  bounded.blocking_bound = 3;
  EXPECT_NE(Encode(instance, bounded).Dump().find("con blocking-bound "),
            std::string::npos);
}

}  // namespace
}  // namespace daycare
