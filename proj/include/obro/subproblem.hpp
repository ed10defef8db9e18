#pragma once

// The inner adversary: worst-case sampled functions at a fixed decision.

#include <cstddef>
#include <vector>

#include "obro/lp.hpp"
#include "obro/model.hpp"

namespace obro {

/// Column positions of one term's variables in the subproblem LP.
struct SubproblemBlock {
  std::size_t values = 0;     // N sample values
  std::size_t slacks = 0;     // N absolute deviations
  std::size_t deviation = 0;  // trapezoid deviation
  std::size_t samples = 0;
};

struct SubproblemModel {
  LinearProgram lp;  // maximization
  std::vector<SubproblemBlock> blocks;
  double constant = 0.0;  // c.x, not part of the LP objective
};

/// Builds the adversary LP at x (x must be polyhedron-feasible).
SubproblemModel build_subproblem(const ObroProblem& prob, const std::vector<double>& x);

struct SubproblemResult {
  Scenario scenario;
  double value = 0.0;  // LP objective + c.x
  std::size_t iterations = 0;
};

/// Solves the adversary LP; a fresh SimplexSolver is used when none is given.
SubproblemResult solve_subproblem(const ObroProblem& prob, const std::vector<double>& x,
                                  LpSolver* solver = nullptr);

}  // namespace obro
