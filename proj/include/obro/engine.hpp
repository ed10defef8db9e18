#pragma once

// Function generation: alternate the adversary LP and the scenario-cut MILP
// until the bounds meet or a generated scenario repeats.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "obro/branch_and_bound.hpp"
#include "obro/model.hpp"

namespace obro {

struct IterationRecord {
  std::size_t k = 0;
  std::vector<double> x;
  double sub_value = 0.0;
  double ub = 0.0;
  double lb = 0.0;
  double gap = 0.0;
  double wall_ms = 0.0;
  std::size_t master_nodes = 0;
};

enum class EngineStatus { converged, max_iterations, error };

const char* to_string(EngineStatus status);

struct EngineOptions {
  double tol = 1e-2;
  std::size_t max_iter = 500;
  // Scenarios closer than this (max over terms of the sup distance) to a
  // stored one count as a repeat.
  double duplicate_tol = 1e-9;
  BranchAndBoundOptions master;
  // Called once per completed iteration.
  std::function<void(const IterationRecord&)> on_iteration;
};

struct EngineResult {
  EngineStatus status = EngineStatus::error;
  std::string message;
  std::vector<double> x;
  double ub = 0.0;
  double lb = 0.0;
  double gap = 0.0;
  std::vector<Scenario> scenarios;
  // Index of the stored scenario with the largest value at x.
  std::size_t worst = 0;
  bool fixed_point = false;
  std::vector<IterationRecord> history;
};

/// Throws InvalidInput on an invalid problem or options. Solver failures are
/// rethrown as SolverFailure with the iteration index in the message.
EngineResult run(const ObroProblem& prob, const EngineOptions& options = {});

struct SaddleReport {
  bool inner_ok = false;
  bool outer_ok = false;
  bool fixed_point_ok = false;
  double inner_excess = 0.0;  // subproblem value at x* - UB
  double outer_diff = 0.0;    // |max_l V(f^l, x') - V at x*| for the re-solved master x'
  double fixed_point_distance = 0.0;

  bool ok() const { return inner_ok && outer_ok && fixed_point_ok; }
};

inline constexpr double kFixedPointTolerance = 1e-6;

SaddleReport verify_saddle(const ObroProblem& prob, const EngineResult& result, double tol,
                           const BranchAndBoundOptions& master = {});

}  // namespace obro
