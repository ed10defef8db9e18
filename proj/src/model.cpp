#include "obro/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "obro/error.hpp"

namespace obro {

std::size_t ObroProblem::num_evals() const {
  std::size_t total = 0;
  for (const auto& t : terms) total += t.evals.size();
  return total;
}

std::size_t ObroProblem::add_variable(double lo, double hi, double c, std::string name) {
  lower.push_back(lo);
  upper.push_back(hi);
  cost.push_back(c);
  names.push_back(std::move(name));
  return cost.size() - 1;
}

std::string ValidationReport::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.path.empty() ? v.message : fmt::format("{}: {}", v.path, v.message);
  }
  return out;
}

ValidationReport validate(const ObroProblem& prob) {
  ValidationReport report;
  auto add = [&](std::string path, std::string message) {
    report.violations.push_back({std::move(path), std::move(message)});
  };

  const std::size_t n = prob.num_vars();
  if (prob.lower.size() != n || prob.upper.size() != n) {
    add("/variables", "bound vectors do not match the variable count");
    return report;
  }
  if (!prob.names.empty() && prob.names.size() != n) add("/variables", "name count mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(prob.cost[j])) add(fmt::format("/variables/{}/cost", j), "cost must be finite");
    if (std::isnan(prob.lower[j]) || std::isnan(prob.upper[j]) || prob.lower[j] > prob.upper[j]) {
      add(fmt::format("/variables/{}", j), "lower bound exceeds upper bound");
    }
  }
  for (std::size_t i = 0; i < prob.rows.size(); ++i) {
    const auto& row = prob.rows[i];
    if (!std::isfinite(row.rhs)) add(fmt::format("/rows/{}/rhs", i), "rhs must be finite");
    for (std::size_t k = 0; k < row.terms.size(); ++k) {
      if (row.terms[k].var >= n) {
        add(fmt::format("/rows/{}/terms/{}", i, k), "variable index out of range");
      } else if (!std::isfinite(row.terms[k].coef)) {
        add(fmt::format("/rows/{}/terms/{}", i, k), "coefficient must be finite");
      }
    }
  }
  if (!(prob.epsilon > 0.0) || !std::isfinite(prob.epsilon)) add("/epsilon", "epsilon must be positive");
  if (prob.terms.empty()) add("/terms", "at least one uncertain term is required");

  std::map<std::size_t, std::size_t> owner;
  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    const auto& term = prob.terms[i];
    try {
      validate_spec(term.spec);
    } catch (const InvalidInput& e) {
      add(fmt::format("/terms/{}/neighborhood", i), e.what());
    }
    if (term.evals.empty()) add(fmt::format("/terms/{}/evals", i), "at least one evaluation variable");
    const auto& part = term.partition();
    const double slack = kRangeSlack * std::max(1.0, part.length());
    for (std::size_t k = 0; k < term.evals.size(); ++k) {
      const auto e = term.evals[k];
      const auto path = fmt::format("/terms/{}/evals/{}", i, k);
      if (e >= n) {
        add(path, "variable index out of range");
        continue;
      }
      if (!owner.emplace(e, i).second) add(path, "duplicate evaluation variable");
      if (prob.lower[e] < part.lower() - slack || prob.upper[e] > part.upper() + slack) {
        add(path, fmt::format("bounds exceed partition: [{}, {}] vs [{}, {}]", prob.lower[e],
                              prob.upper[e], part.lower(), part.upper()));
      }
    }
  }
  return report;
}

void require_valid(const ObroProblem& prob) {
  const auto report = validate(prob);
  if (!report.ok()) throw InvalidInput("invalid problem: " + report.summary());
}

LinearProgram polyhedron(const ObroProblem& prob) {
  LinearProgram lp;
  lp.sense = ObjectiveSense::minimize;
  lp.cost = prob.cost;
  lp.lower = prob.lower;
  lp.upper = prob.upper;
  lp.names = prob.names;
  lp.rows = prob.rows;
  return lp;
}

Scenario reference_scenario(const ObroProblem& prob) {
  Scenario scen;
  for (const auto& term : prob.terms) {
    scen.functions.push_back(term.spec.reference);
    scen.deviations.push_back(0.0);
  }
  return scen;
}

void validate_scenario(const ObroProblem& prob, const Scenario& scen, double tol) {
  if (scen.functions.size() != prob.terms.size() || scen.deviations.size() != prob.terms.size()) {
    throw InvalidInput("scenario does not match the number of terms");
  }
  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    const auto& spec = prob.terms[i].spec;
    if (!(scen.functions[i].partition() == spec.reference.partition())) {
      throw InvalidInput(fmt::format("scenario function {} uses a different partition", i));
    }
    const auto report = check_neighborhood(scen.functions[i], spec, tol);
    if (!report.ok()) {
      throw InvalidInput(fmt::format(
          "scenario function {} leaves its neighborhood (sup {:.3g}, deviation {:.3g}, ratio {:.3g})", i,
          report.sup_violation, report.deviation_violation, report.ratio_violation));
    }
    const double dev = trapezoid_deviation(scen.functions[i], spec.reference);
    if (std::abs(dev - scen.deviations[i]) > tol) {
      throw InvalidInput(fmt::format("scenario deviation {} is {} but the function gives {}", i,
                                     scen.deviations[i], dev));
    }
  }
}

double scenario_distance(const Scenario& a, const Scenario& b) {
  if (a.functions.size() != b.functions.size()) {
    throw InvalidInput("scenarios have different term counts");
  }
  double dist = 0.0;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    dist = std::max(dist, sup_distance(a.functions[i], b.functions[i]));
  }
  return dist;
}

void require_feasible(const ObroProblem& prob, const std::vector<double>& x, double tol) {
  if (x.size() != prob.num_vars()) {
    throw InvalidInput(fmt::format("decision vector has {} entries, expected {}", x.size(), prob.num_vars()));
  }
  const double viol = max_violation(polyhedron(prob), x);
  if (viol > tol) throw InvalidInput(fmt::format("decision vector violates the polyhedron by {:.3g}", viol));
}

double evaluate_v(const ObroProblem& prob, const Scenario& scen, const std::vector<double>& x) {
  require_feasible(prob, x);
  if (scen.functions.size() != prob.terms.size() || scen.deviations.size() != prob.terms.size()) {
    throw InvalidInput("scenario does not match the number of terms");
  }
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) v += prob.cost[j] * x[j];
  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    for (const auto e : prob.terms[i].evals) v += interpolate(scen.functions[i], x[e]);
    v -= prob.epsilon * scen.deviations[i];
  }
  return v;
}

}  // namespace obro
