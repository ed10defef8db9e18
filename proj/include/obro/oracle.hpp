#pragma once

// Brute-force cross-checks for small instances and the partition refinement
// study.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "obro/engine.hpp"
#include "obro/model.hpp"

namespace obro {

struct BruteForceOptions {
  std::size_t levels = 101;
  // Largest grid (levels^N) enumerated for any single term.
  double grid_budget = 2.5e8;
};

struct BruteForceResult {
  double value = 0.0;
  Scenario scenario;
  // Sum over terms of (objective Lipschitz constant) x (grid step): the
  // largest amount by which the grid optimum may trail the LP optimum.
  double error_bound = 0.0;
  std::size_t leaves = 0;
};

/// Enumerates every term's sample values on a uniform grid over the sup box
/// and keeps the best admissible combination. Terms are independent given x,
/// so each is enumerated separately. Ties keep the lexicographically smallest
/// grid index. Throws BudgetExceeded when a term's grid is too large.
BruteForceResult brute_force_subproblem(const ObroProblem& prob, const std::vector<double>& x,
                                        const BruteForceOptions& options = {});

struct EnumerationResult {
  double value = 0.0;
  std::vector<double> x;
  std::size_t combinations = 0;
};

/// Fixes one segment per evaluation variable, solves the LP in which each
/// scenario function is linear on the chosen segments, and keeps the best.
/// Throws BudgetExceeded past `budget` combinations and ProblemInfeasible when
/// no combination is feasible.
EnumerationResult enumerate_master(const ObroProblem& prob, const std::vector<Scenario>& scenarios,
                                   double budget = 1e6);

struct RefinementRow {
  double step = 0.0;
  EngineStatus status = EngineStatus::error;
  std::size_t iterations = 0;
  double value = 0.0;
  std::vector<double> x;
  double x_distance = 0.0;      // to the previous row; 0 for the first
  double value_distance = 0.0;  // to the previous row; 0 for the first
};

struct RefinementStudy {
  std::vector<RefinementRow> rows;
  // Distances of x* between consecutive steps never grow.
  bool x_distances_nonincreasing = true;
  bool value_distances_nonincreasing = true;
  // Every x* distance is at most the first pair's.
  bool x_bounded_by_first = true;
};

/// Runs the engine for each step (strictly decreasing, at least two).
RefinementStudy refinement_study(const std::function<ObroProblem(double)>& build,
                                 const std::vector<double>& steps, const EngineOptions& options = {},
                                 double pair_tol = 1e-9);

void write_refinement_csv(std::ostream& os, const RefinementStudy& study);

}  // namespace obro
