#pragma once

// Linear and mixed-binary programs, solver interfaces and a plain-text dump
// for cross-checking against external solvers.

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace obro {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { minimize, maximize };
enum class RowSense { less_equal, equal, greater_equal };

struct LinearTerm {
  std::size_t var = 0;
  double coef = 0.0;
};

struct LinearRow {
  std::vector<LinearTerm> terms;
  RowSense sense = RowSense::less_equal;
  double rhs = 0.0;
  std::string name;
};

struct LinearProgram {
  ObjectiveSense sense = ObjectiveSense::minimize;
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> names;
  std::vector<LinearRow> rows;

  std::size_t num_vars() const { return cost.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_variable(double lo, double hi, double c = 0.0, std::string name = {});
  std::size_t add_row(std::vector<LinearTerm> terms, RowSense sense, double rhs,
                      std::string name = {});

  /// Throws InvalidInput on size mismatches, bad indices, lo > hi or NaNs.
  void validate() const;
};

struct MixedIntegerProgram {
  LinearProgram lp;
  std::vector<std::size_t> binaries;

  void validate() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit, node_limit };

const char* to_string(SolveStatus status);

struct SolveOutcome {
  SolveStatus status = SolveStatus::infeasible;
  double objective = 0.0;
  // Present iff status == optimal.
  std::vector<double> primal;
  // LP only: d objective / d rhs for every row.
  std::vector<double> dual;
  std::size_t iterations = 0;
  std::size_t nodes = 0;

  bool optimal() const { return status == SolveStatus::optimal; }
};

/// Largest violation of rows and bounds by x (0 when feasible).
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

/// Objective value of x, without any sense adjustment.
double objective_value(const LinearProgram& lp, const std::vector<double>& x);

class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual SolveOutcome solve(const LinearProgram& lp) = 0;
};

class MilpSolver {
 public:
  virtual ~MilpSolver() = default;
  virtual SolveOutcome solve(const MixedIntegerProgram& mip) = 0;
};

/// Layout: objective, rows, bounds, binaries; one item per line.
void write_lp_text(std::ostream& os, const LinearProgram& lp,
                   const std::vector<std::size_t>& binaries = {});
void write_lp_text(std::ostream& os, const MixedIntegerProgram& mip);

}  // namespace obro
