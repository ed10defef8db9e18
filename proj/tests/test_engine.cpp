#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "obro/engine.hpp"
#include "obro/subproblem.hpp"

namespace obro {
namespace {

using testing::identity_problem;

ObroProblem two_term_problem() {
  ObroProblem prob;
  for (int j = 0; j < 3; ++j) prob.add_variable(0.0, 1.0, 0.0, "x" + std::to_string(j + 1));
  prob.rows.push_back({{{0, 1.0}, {1, 1.0}, {2, 1.0}}, RowSense::greater_equal, 1.2, "demand"});
  prob.epsilon = 0.2;
  prob.terms.push_back(
      {"convex", {SampledFunction(Partition({0.0, 0.5, 1.0}), {0.0, 0.3, 1.0}), 0.15, 0.1, 1.5}, {0, 2}});
  prob.terms.push_back(
      {"concave", {SampledFunction(Partition({0.0, 0.4, 1.0}), {0.0, 0.5, 0.8}), 0.2, 0.08, 2.0}, {1}});
  return prob;
}

void expect_invariants(const EngineResult& res) {
  for (std::size_t k = 0; k < res.history.size(); ++k) {
    const auto& r = res.history[k];
    EXPECT_EQ(r.k, k);
    EXPECT_GE(r.gap, -1e-6);
    EXPECT_DOUBLE_EQ(r.gap, r.ub - r.lb);
    if (k > 0) {
      EXPECT_LE(r.ub, res.history[k - 1].ub);
      EXPECT_GE(r.lb, res.history[k - 1].lb);
    }
  }
}

TEST(Engine, DegenerateNeighborhoodConvergesImmediately) {
  const auto prob = identity_problem(0.0);
  const auto res = run(prob);
  EXPECT_EQ(res.status, EngineStatus::converged);
  ASSERT_EQ(res.history.size(), 1u);
  EXPECT_NEAR(res.gap, 0.0, 1e-12);
  EXPECT_NEAR(res.ub, 0.0, 1e-12);
  EXPECT_TRUE(verify_saddle(prob, res, 1e-4).ok());
}

// x0 = 0 from the reference master; the adversary answers 0.095 at x = 0
// (raise f(0) by 0.1). The master with both scenarios still picks x = 0 with
// eta = 0.095.
TEST(Engine, IdentityInstanceHandTrace) {
  const auto prob = identity_problem();
  const auto res = run(prob);
  EXPECT_EQ(res.status, EngineStatus::converged);
  EXPECT_NEAR(res.x[0], 0.0, 1e-9);
  EXPECT_NEAR(res.ub, 0.095, 1e-9);
  EXPECT_NEAR(res.lb, 0.095, 1e-9);
  EXPECT_EQ(res.scenarios.size(), 2u);
  EXPECT_EQ(res.worst, 1u);
  expect_invariants(res);
  const auto saddle = verify_saddle(prob, res, 1e-4);
  EXPECT_TRUE(saddle.ok());
  EXPECT_LE(saddle.fixed_point_distance, kFixedPointTolerance);
}

TEST(Engine, TwoTermInstance) {
  const auto prob = two_term_problem();
  std::size_t calls = 0;
  EngineOptions opts;
  opts.tol = 1e-7;
  opts.on_iteration = [&](const IterationRecord&) { ++calls; };
  const auto res = run(prob, opts);
  EXPECT_EQ(res.status, EngineStatus::converged);
  EXPECT_EQ(calls, res.history.size());
  EXPECT_LE(res.gap, 1e-7);
  expect_invariants(res);
  EXPECT_NO_THROW(require_feasible(prob, res.x));
  EXPECT_NEAR(solve_subproblem(prob, res.x).value, res.ub, 1e-6);
  EXPECT_TRUE(verify_saddle(prob, res, 1e-4).ok());
}

TEST(Engine, ScenariosAreDistinct) {
  const auto res = run(two_term_problem(), EngineOptions{1e-9});
  for (std::size_t a = 0; a < res.scenarios.size(); ++a) {
    for (std::size_t b = a + 1; b < res.scenarios.size(); ++b) {
      EXPECT_GT(scenario_distance(res.scenarios[a], res.scenarios[b]), 1e-9);
    }
  }
}

TEST(Engine, TruncatedRunFailsFixedPointCheck) {
  const auto prob = two_term_problem();
  EngineOptions opts;
  opts.max_iter = 1;
  const auto res = run(prob, opts);
  EXPECT_EQ(res.status, EngineStatus::max_iterations);
  EXPECT_EQ(res.history.size(), 1u);
  const auto saddle = verify_saddle(prob, res, 1e-4);
  EXPECT_FALSE(saddle.fixed_point_ok);
  EXPECT_FALSE(saddle.ok());
}

TEST(Engine, RandomInstancesKeepInvariants) {
  std::mt19937_64 rng(31337);
  for (int run_id = 0; run_id < 15; ++run_id) {
    const auto prob = testing::random_problem(rng);
    EngineOptions opts;
    opts.tol = 1e-6;
    const auto res = run(prob, opts);
    EXPECT_EQ(res.status, EngineStatus::converged) << "run " << run_id;
    expect_invariants(res);
    EXPECT_TRUE(verify_saddle(prob, res, 1e-4).inner_ok) << "run " << run_id;
  }
}

TEST(Engine, Deterministic) {
  const auto prob = two_term_problem();
  const auto a = run(prob);
  const auto b = run(prob);
  ASSERT_EQ(a.history.size(), b.history.size());
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.ub, b.ub);
  EXPECT_EQ(a.lb, b.lb);
}

TEST(Engine, RejectsBadOptions) {
  const auto prob = identity_problem();
  EngineOptions opts;
  opts.tol = 0.0;
  EXPECT_THROW(run(prob, opts), InvalidInput);
  opts = {};
  opts.max_iter = 0;
  EXPECT_THROW(run(prob, opts), InvalidInput);
  auto bad = prob;
  bad.epsilon = -1.0;
  EXPECT_THROW(run(bad), InvalidInput);
}

TEST(Engine, InfeasiblePolyhedronNamesIteration) {
  auto prob = identity_problem();
  prob.rows.push_back({{{0, 1.0}}, RowSense::greater_equal, 2.0, "impossible"});
  try {
    run(prob);
    FAIL() << "expected ProblemInfeasible";
  } catch (const ProblemInfeasible& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 0"), std::string::npos);
  }
}

}  // namespace
}  // namespace obro
