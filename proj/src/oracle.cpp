#include "obro/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "obro/csv.hpp"
#include "obro/error.hpp"
#include "obro/simplex.hpp"

namespace obro {

namespace {

constexpr double kGridTol = 1e-9;

struct TermSearch {
  std::size_t n = 0;
  std::size_t levels = 0;
  std::vector<double> grid_lo;
  double step = 0.0;
  std::vector<double> ref;
  std::vector<double> weight;  // objective weight of each sample
  std::vector<double> trap;    // trapezoid weight of each sample
  std::vector<double> ratio_cap;
  double dev_max = 0.0;
  double eps = 0.0;
  std::vector<double> tail_bound;  // best possible objective from p onwards

  std::vector<std::size_t> idx;
  std::vector<std::size_t> best_idx;
  double best = -kInf;
  std::size_t leaves = 0;

  double value(std::size_t p, std::size_t j) const { return grid_lo[p] + step * static_cast<double>(j); }

  void dfs(std::size_t p, double obj, double dev) {
    if (p == n) {
      ++leaves;
      const double total = obj - eps * dev;
      if (total > best) {
        best = total;
        best_idx = idx;
      }
      return;
    }
    if (obj - eps * dev + tail_bound[p] <= best) return;
    for (std::size_t j = 0; j < levels; ++j) {
      const double f = value(p, j);
      if (p > 0 && std::abs(f - value(p - 1, idx[p - 1])) > ratio_cap[p - 1] + kGridTol) continue;
      const double d = dev + trap[p] * std::abs(f - ref[p]);
      if (d > dev_max + kGridTol) continue;
      idx[p] = j;
      dfs(p + 1, obj + weight[p] * f, d);
    }
  }
};

}  // namespace

BruteForceResult brute_force_subproblem(const ObroProblem& prob, const std::vector<double>& x,
                                        const BruteForceOptions& options) {
  require_valid(prob);
  require_feasible(prob, x);
  if (options.levels < 3) throw InvalidInput("brute force needs at least 3 grid levels");

  BruteForceResult result;
  for (std::size_t j = 0; j < x.size(); ++j) result.value += prob.cost[j] * x[j];

  for (const auto& term : prob.terms) {
    const auto& spec = term.spec;
    const auto& ref = spec.reference;
    const auto& part = ref.partition();

    TermSearch s;
    s.n = part.size();
    s.levels = spec.delta_max > 0.0 ? options.levels : 1;
    const double grid = std::pow(static_cast<double>(s.levels), static_cast<double>(s.n));
    if (grid > options.grid_budget) {
      throw BudgetExceeded(fmt::format("term '{}' needs a grid of {:.3g} points, budget is {:.3g}", term.name,
                                       grid, options.grid_budget));
    }
    s.step = s.levels > 1 ? 2.0 * spec.delta_max / static_cast<double>(s.levels - 1) : 0.0;
    s.dev_max = spec.dev_max;
    s.eps = prob.epsilon;
    s.weight.assign(s.n, 0.0);
    s.trap.assign(s.n, 0.0);
    for (std::size_t p = 0; p < s.n; ++p) {
      s.ref.push_back(ref[p]);
      s.grid_lo.push_back(s.levels > 1 ? ref[p] - spec.delta_max : ref[p]);
      if (p > 0) s.trap[p] += 0.5 * (part[p] - part[p - 1]);
      if (p + 1 < s.n) s.trap[p] += 0.5 * (part[p + 1] - part[p]);
    }
    for (std::size_t p = 0; p + 1 < s.n; ++p) s.ratio_cap.push_back(spec.lip_ratio * std::abs(ref[p] - ref[p + 1]));
    for (const auto e : term.evals) {
      const auto c = interp_coefficients(part, x[e]);
      s.weight[c.segment] += c.alpha_lo;
      s.weight[c.segment + 1] += c.alpha_hi;
    }
    s.tail_bound.assign(s.n + 1, 0.0);
    for (std::size_t p = s.n; p-- > 0;) {
      s.tail_bound[p] = s.tail_bound[p + 1] + s.weight[p] * (ref[p] + spec.delta_max);
    }
    s.idx.assign(s.n, 0);
    s.dfs(0, 0.0, 0.0);
    if (s.best_idx.empty()) throw SolverFailure(fmt::format("no admissible grid point for term '{}'", term.name));

    std::vector<double> values;
    for (std::size_t p = 0; p < s.n; ++p) values.push_back(s.value(p, s.best_idx[p]));
    SampledFunction f(part, std::move(values));
    result.scenario.deviations.push_back(trapezoid_deviation(f, ref));
    result.scenario.functions.push_back(std::move(f));
    result.value += s.best;
    result.leaves += s.leaves;
    const double lip = static_cast<double>(term.evals.size()) + prob.epsilon * part.length();
    result.error_bound += lip * s.step;
  }
  return result;
}

EnumerationResult enumerate_master(const ObroProblem& prob, const std::vector<Scenario>& scenarios,
                                   double budget) {
  require_valid(prob);
  if (scenarios.empty()) throw InvalidInput("enumeration needs at least one scenario");
  for (const auto& scen : scenarios) validate_scenario(prob, scen);

  struct Eval {
    std::size_t term, var;
  };
  std::vector<Eval> evals;
  double combos = 1.0;
  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    for (const auto e : prob.terms[i].evals) {
      evals.push_back({i, e});
      combos *= static_cast<double>(prob.terms[i].partition().segments());
    }
  }
  if (combos > budget) {
    throw BudgetExceeded(fmt::format("master enumeration needs {:.3g} combinations, budget is {:.3g}", combos, budget));
  }

  const LinearProgram base = polyhedron(prob);
  const std::size_t n = prob.num_vars();
  EnumerationResult result;
  result.value = kInf;
  std::vector<std::size_t> seg(evals.size(), 0);
  SimplexSolver solver;

  while (true) {
    LinearProgram lp = base;
    std::fill(lp.cost.begin(), lp.cost.end(), 0.0);
    const std::size_t eta = lp.add_variable(-kInf, kInf, 1.0, "eta");
    bool empty = false;
    for (std::size_t k = 0; k < evals.size(); ++k) {
      const auto& part = prob.terms[evals[k].term].partition();
      const auto v = evals[k].var;
      lp.lower[v] = std::max(lp.lower[v], part[seg[k]]);
      lp.upper[v] = std::min(lp.upper[v], part[seg[k] + 1]);
      if (lp.lower[v] > lp.upper[v]) empty = true;
    }
    if (!empty) {
      for (const auto& scen : scenarios) {
        // eta - c.x - sum_e (slope_e x_e) >= const
        std::vector<double> coef(n, 0.0);
        double rhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) coef[j] -= prob.cost[j];
        for (std::size_t k = 0; k < evals.size(); ++k) {
          const auto& f = scen.functions[evals[k].term];
          const auto& part = f.partition();
          const std::size_t p = seg[k];
          const double slope = (f[p + 1] - f[p]) / (part[p + 1] - part[p]);
          coef[evals[k].var] -= slope;
          rhs += f[p] - slope * part[p];
        }
        for (std::size_t i = 0; i < prob.terms.size(); ++i) rhs -= prob.epsilon * scen.deviations[i];
        std::vector<LinearTerm> terms{{eta, 1.0}};
        for (std::size_t j = 0; j < n; ++j) {
          if (coef[j] != 0.0) terms.push_back({j, coef[j]});
        }
        lp.add_row(std::move(terms), RowSense::greater_equal, rhs);
      }
      const auto out = solver.solve(lp);
      ++result.combinations;
      if (out.optimal() && out.objective < result.value) {
        result.value = out.objective;
        result.x.assign(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(n));
      } else if (out.status == SolveStatus::unbounded) {
        throw SolverFailure("master enumeration hit an unbounded LP");
      }
    }

    std::size_t k = 0;
    while (k < evals.size()) {
      if (++seg[k] < prob.terms[evals[k].term].partition().segments()) break;
      seg[k] = 0;
      ++k;
    }
    if (k == evals.size()) break;
  }
  if (result.x.empty()) throw ProblemInfeasible("no segment combination admits a feasible decision");
  return result;
}

RefinementStudy refinement_study(const std::function<ObroProblem(double)>& build,
                                 const std::vector<double>& steps, const EngineOptions& options,
                                 double pair_tol) {
  if (steps.size() < 2) throw InvalidInput("refinement study needs at least two steps");
  for (std::size_t k = 1; k < steps.size(); ++k) {
    if (!(steps[k] < steps[k - 1])) throw InvalidInput("refinement steps must be strictly decreasing");
  }

  RefinementStudy study;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    RefinementRow row;
    row.step = steps[k];
    EngineResult res;
    try {
      res = run(build(steps[k]), options);
    } catch (const Error& e) {
      throw SolverFailure(fmt::format("refinement step {}: {}", steps[k], e.what()));
    }
    row.status = res.status;
    row.iterations = res.history.size();
    row.value = res.ub;
    row.x = res.x;
    if (k > 0) {
      const auto& prev = study.rows.back();
      if (prev.x.size() != row.x.size()) {
        throw InvalidInput("refinement steps produced decision vectors of different sizes");
      }
      for (std::size_t j = 0; j < row.x.size(); ++j) {
        row.x_distance = std::max(row.x_distance, std::abs(row.x[j] - prev.x[j]));
      }
      row.value_distance = std::abs(row.value - prev.value);
    }
    spdlog::info("refinement step {}: value {:.10g}, x distance {:.3g}", row.step, row.value, row.x_distance);
    study.rows.push_back(std::move(row));
  }
  for (std::size_t k = 2; k < study.rows.size(); ++k) {
    const auto& a = study.rows[k - 1];
    const auto& b = study.rows[k];
    if (b.x_distance > a.x_distance + pair_tol) study.x_distances_nonincreasing = false;
    if (b.value_distance > a.value_distance + pair_tol) study.value_distances_nonincreasing = false;
    if (b.x_distance > study.rows[1].x_distance + pair_tol) study.x_bounded_by_first = false;
  }
  return study;
}

void write_refinement_csv(std::ostream& os, const RefinementStudy& study) {
  os << "step,status,iterations,value,x_distance,value_distance\n";
  for (std::size_t k = 0; k < study.rows.size(); ++k) {
    const auto& r = study.rows[k];
    os << csv_number(r.step) << ',' << to_string(r.status) << ',' << r.iterations << ',' << csv_number(r.value)
       << ',' << (k ? csv_number(r.x_distance) : "") << ',' << (k ? csv_number(r.value_distance) : "") << '\n';
  }
}

}  // namespace obro
