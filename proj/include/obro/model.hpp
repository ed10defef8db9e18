#pragma once

// A discretized robust problem: decision polyhedron, certain linear cost and
// the uncertain function terms the adversary controls.

#include <cstddef>
#include <string>
#include <vector>

#include "obro/lp.hpp"
#include "obro/pwl.hpp"

namespace obro {

/// One uncertain function, evaluated at one or more decision variables.
struct UncertainTerm {
  std::string name;
  NeighborhoodSpec spec;
  std::vector<std::size_t> evals;

  const Partition& partition() const { return spec.reference.partition(); }
};

struct ObroProblem {
  // Decision vector (decisions and auxiliaries).
  std::vector<std::string> names;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> cost;
  std::vector<LinearRow> rows;
  double epsilon = 0.1;
  std::vector<UncertainTerm> terms;

  std::size_t num_vars() const { return cost.size(); }
  std::size_t num_evals() const;

  std::size_t add_variable(double lo, double hi, double c = 0.0, std::string name = {});
};

struct Violation {
  std::string path;  // JSON-pointer style, e.g. /terms/0/evals/2
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const ObroProblem& prob);

/// Throws InvalidInput carrying the report summary when validation fails.
void require_valid(const ObroProblem& prob);

/// The decision polyhedron as an LP minimizing the certain cost.
LinearProgram polyhedron(const ObroProblem& prob);

/// One sampled function per term plus its precomputed deviation.
struct Scenario {
  std::vector<SampledFunction> functions;
  std::vector<double> deviations;
};

Scenario reference_scenario(const ObroProblem& prob);

inline constexpr double kScenarioTolerance = 1e-7;

/// Throws InvalidInput if a function leaves its neighborhood or a stored
/// deviation disagrees with the trapezoid deviation.
void validate_scenario(const ObroProblem& prob, const Scenario& scen,
                       double tol = kScenarioTolerance);

/// Largest per-term sup distance; scenarios must belong to the same problem.
double scenario_distance(const Scenario& a, const Scenario& b);

inline constexpr double kFeasibilityTolerance = 1e-7;

/// c.x + sum over terms and evaluation points of f(x[e]) - epsilon * sum D.
double evaluate_v(const ObroProblem& prob, const Scenario& scen, const std::vector<double>& x);

/// Throws InvalidInput if x has the wrong size or violates the polyhedron.
void require_feasible(const ObroProblem& prob, const std::vector<double>& x,
                      double tol = kFeasibilityTolerance);

}  // namespace obro
