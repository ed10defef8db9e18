#pragma once

#include <cstddef>

#include "obro/lp.hpp"
#include "obro/simplex.hpp"

namespace obro {

struct BranchAndBoundOptions {
  std::size_t node_limit = 1'000'000;
  // A warning is logged once the tree grows past this many nodes.
  std::size_t node_warning = 10'000;
  double integrality_tol = 1e-7;
  double absolute_gap = 1e-9;
  double relative_gap = 1e-12;
  SimplexOptions lp;
};

struct BranchAndBoundStats {
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  std::size_t max_depth = 0;
  double root_bound = 0.0;
  // Children whose relaxation came out better than their parent's bound.
  std::size_t bound_inversions = 0;
};

/// Branch and bound over binary variables on LP relaxations.
///
/// Nodes are explored best-bound first (ties by creation order). The branching
/// variable is the most fractional binary, smallest index on ties. Each child
/// LP is warm-started from its parent's optimal basis.
class BranchAndBoundSolver final : public MilpSolver {
 public:
  explicit BranchAndBoundSolver(BranchAndBoundOptions options = {});

  SolveOutcome solve(const MixedIntegerProgram& mip) override;

  const BranchAndBoundStats& stats() const { return stats_; }

 private:
  BranchAndBoundOptions options_;
  BranchAndBoundStats stats_;
};

}  // namespace obro
