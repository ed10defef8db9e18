#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "obro/lp.hpp"

namespace obro {

struct SimplexOptions {
  std::size_t max_iterations = 1'000'000;
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  // Basis refactorization period (eta file length).
  std::size_t refactor_interval = 64;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t degenerate_limit = 50;
};

enum class VarStatus : std::uint8_t { basic, at_lower, at_upper, at_zero };

/// Status of every structural column followed by every row activity.
struct Basis {
  std::vector<VarStatus> status;
};

/// Bounded-variable revised primal simplex.
///
/// Rows are turned into equalities `a_i x - r_i = 0` with the row activity
/// `r_i` carrying the row bounds, so every basis starts from the all-activity
/// basis. Phase 1 minimizes the sum of bound violations of basic variables.
/// Pricing is Dantzig's rule; after `degenerate_limit` consecutive degenerate
/// pivots the solver falls back to Bland's smallest-index rule until progress
/// resumes, which rules out cycling. Results are deterministic.
///
/// One solve at a time per instance.
class SimplexSolver final : public LpSolver {
 public:
  explicit SimplexSolver(SimplexOptions options = {});
  ~SimplexSolver() override;
  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  SolveOutcome solve(const LinearProgram& lp) override;

  // Incremental use: load once, then change column bounds and re-solve from a
  // previous basis.
  void load(const LinearProgram& lp);
  void set_bounds(std::size_t var, double lo, double hi);
  SolveOutcome resolve(const Basis* warm_start = nullptr);
  const Basis& basis() const;

  const SimplexOptions& options() const { return options_; }

 private:
  struct Impl;
  SimplexOptions options_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace obro
