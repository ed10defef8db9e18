#pragma once

// The outer decision maker: minimize the worst value over accumulated
// scenarios, with each evaluation point encoded by an SOS2 block.

#include <cstddef>
#include <vector>

#include "obro/branch_and_bound.hpp"
#include "obro/lp.hpp"
#include "obro/model.hpp"

namespace obro {

/// Column positions of the SOS2 block of one evaluation variable.
struct Sos2Block {
  std::size_t term = 0;
  std::size_t var = 0;    // evaluation variable
  std::size_t alpha = 0;  // N weights
  std::size_t beta = 0;   // N - 1 segment switches
  std::size_t samples = 0;
};

/// Columns: the decision vector, then eta, then one SOS2 block per
/// evaluation variable in term order.
struct MasterModel {
  MixedIntegerProgram mip;
  std::size_t eta = 0;
  std::vector<Sos2Block> blocks;
  std::vector<std::size_t> cut_rows;
};

MasterModel build_master(const ObroProblem& prob, const std::vector<Scenario>& scenarios);

struct MasterResult {
  std::vector<double> x;
  double eta = 0.0;
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
};

/// Throws ProblemInfeasible if the polyhedron is empty and SolverFailure on a
/// node limit.
MasterResult solve_master(const ObroProblem& prob, const std::vector<Scenario>& scenarios,
                          const BranchAndBoundOptions& options = {});

}  // namespace obro
