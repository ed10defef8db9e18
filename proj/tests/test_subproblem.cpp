#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "obro/oracle.hpp"
#include "obro/subproblem.hpp"

namespace obro {
namespace {

using testing::identity_problem;

// Hand enumeration for the identity instance at x = 1: raising f(1) to the
// sup cap gains 0.1 and costs 0.1 * trapezoid(0, 0.1) = 0.005. Lowering f(0)
// only adds penalty.
TEST(Subproblem, IdentityAtUpperEnd) {
  const auto prob = identity_problem();
  const auto res = solve_subproblem(prob, {1.0});
  EXPECT_NEAR(res.value, 1.095, 1e-9);
  EXPECT_NEAR(res.scenario.functions[0][0], 0.0, 1e-9);
  EXPECT_NEAR(res.scenario.functions[0][1], 1.1, 1e-9);
  EXPECT_NEAR(res.scenario.deviations[0], 0.05, 1e-9);
}

// At x = 0 only f(0) matters: +0.1 costs 0.1 * 0.5 * 0.1 = 0.005.
TEST(Subproblem, IdentityAtLowerEnd) {
  const auto prob = identity_problem();
  const auto res = solve_subproblem(prob, {0.0});
  EXPECT_NEAR(res.value, 0.095, 1e-9);
  EXPECT_NEAR(res.scenario.functions[0][0], 0.1, 1e-9);
  EXPECT_NEAR(res.scenario.functions[0][1], 1.0, 1e-9);
}

TEST(Subproblem, DegenerateNeighborhoodReturnsReference) {
  const auto prob = identity_problem(0.0);
  for (double x : {0.0, 0.3, 1.0}) {
    const auto res = solve_subproblem(prob, {x});
    EXPECT_EQ(res.scenario.functions[0], prob.terms[0].spec.reference);
    EXPECT_NEAR(res.value, evaluate_v(prob, reference_scenario(prob), {x}), 1e-12);
  }
}

TEST(Subproblem, DeviationBudgetCapsTheRaise) {
  // Budget 0.02 allows f(1) up to 0.04 above the reference.
  const auto prob = identity_problem(0.1, 2.0, 0.02);
  const auto res = solve_subproblem(prob, {1.0});
  EXPECT_NEAR(res.scenario.functions[0][1], 1.04, 1e-9);
  EXPECT_NEAR(res.value, 1.04 - 0.1 * 0.02, 1e-9);
}

TEST(Subproblem, RatioBoundLimitsSlopeChanges) {
  // Two segments with slopes 1 and 1. The ratio bound 1.2 keeps each new
  // slope in [-1.2, 1.2].
  ObroProblem prob;
  prob.add_variable(0.0, 2.0, 0.0, "x");
  prob.epsilon = 0.01;
  SampledFunction ref(Partition({0.0, 1.0, 2.0}), {0.0, 1.0, 2.0});
  prob.terms.push_back({"f", {ref, 0.5, 10.0, 1.2}, {0}});
  const auto res = solve_subproblem(prob, {1.0});
  const auto& f = res.scenario.functions[0];
  EXPECT_LE(std::abs(f[1] - f[0]), 1.2 + 1e-9);
  EXPECT_LE(std::abs(f[2] - f[1]), 1.2 + 1e-9);
  EXPECT_TRUE(check_neighborhood(f, prob.terms[0].spec, 1e-7).ok());
  // Raise f(1) by 0.5 as far as the ratio allows from f(0) and f(2).
  EXPECT_NEAR(f[1], 1.2 + f[0], 1e-6);
}

TEST(Subproblem, ModelLayout) {
  const auto prob = identity_problem();
  const auto model = build_subproblem(prob, {0.25});
  EXPECT_EQ(model.lp.sense, ObjectiveSense::maximize);
  ASSERT_EQ(model.blocks.size(), 1u);
  EXPECT_EQ(model.blocks[0].samples, 2u);
  EXPECT_EQ(model.lp.num_vars(), 5u);
  EXPECT_DOUBLE_EQ(model.lp.cost[model.blocks[0].values], 0.75);
  EXPECT_DOUBLE_EQ(model.lp.cost[model.blocks[0].values + 1], 0.25);
  EXPECT_DOUBLE_EQ(model.lp.cost[model.blocks[0].deviation], -0.1);
}

TEST(Subproblem, RejectsInfeasiblePoint) {
  const auto prob = identity_problem();
  EXPECT_THROW(solve_subproblem(prob, {1.5}), InvalidInput);
  EXPECT_THROW(solve_subproblem(prob, {}), InvalidInput);
}

TEST(Subproblem, RandomInstancesAgreeWithGridSearch) {
  std::mt19937_64 rng(20240611);
  testing::RandomShape shape;
  shape.max_samples = 3;
  BruteForceOptions opts;
  opts.levels = 41;
  for (int run = 0; run < 25; ++run) {
    const auto prob = testing::random_problem(rng, shape);
    const auto x = testing::random_point(rng, prob);
    const auto lp = solve_subproblem(prob, x);
    const auto bf = brute_force_subproblem(prob, x, opts);
    EXPECT_LE(bf.value, lp.value + 1e-9) << "run " << run;
    EXPECT_GE(bf.value, lp.value - bf.error_bound - 1e-9) << "run " << run;
    EXPECT_NEAR(evaluate_v(prob, lp.scenario, x), lp.value, 1e-7) << "run " << run;
    for (std::size_t i = 0; i < prob.terms.size(); ++i) {
      EXPECT_TRUE(check_neighborhood(lp.scenario.functions[i], prob.terms[i].spec, 1e-7).ok());
    }
  }
}

TEST(Subproblem, ValueIsAtLeastReferenceValue) {
  std::mt19937_64 rng(7);
  for (int run = 0; run < 40; ++run) {
    const auto prob = testing::random_problem(rng);
    const auto x = testing::random_point(rng, prob);
    EXPECT_GE(solve_subproblem(prob, x).value, evaluate_v(prob, reference_scenario(prob), x) - 1e-9);
  }
}

}  // namespace
}  // namespace obro
