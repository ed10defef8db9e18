#include "obro/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "obro/error.hpp"
#include "obro/master.hpp"
#include "obro/subproblem.hpp"

namespace obro {

const char* to_string(EngineStatus status) {
  switch (status) {
    case EngineStatus::converged: return "converged";
    case EngineStatus::max_iterations: return "max-iterations";
    case EngineStatus::error: return "error";
  }
  return "unknown";
}

namespace {

double nearest_scenario(const std::vector<Scenario>& pool, const Scenario& scen) {
  double best = kInf;
  for (const auto& s : pool) best = std::min(best, scenario_distance(s, scen));
  return best;
}

std::size_t worst_scenario(const ObroProblem& prob, const std::vector<Scenario>& pool,
                           const std::vector<double>& x, double* value = nullptr) {
  std::size_t worst = 0;
  double best = -kInf;
  for (std::size_t l = 0; l < pool.size(); ++l) {
    const double v = evaluate_v(prob, pool[l], x);
    if (v > best) {
      best = v;
      worst = l;
    }
  }
  if (value) *value = best;
  return worst;
}

template <class Fn>
auto at_iteration(std::size_t k, Fn&& fn) {
  try {
    return fn();
  } catch (const ProblemInfeasible& e) {
    throw ProblemInfeasible(fmt::format("iteration {}: {}", k, e.what()));
  } catch (const SolverFailure& e) {
    throw SolverFailure(fmt::format("iteration {}: {}", k, e.what()));
  }
}

}  // namespace

EngineResult run(const ObroProblem& prob, const EngineOptions& options) {
  require_valid(prob);
  if (!(options.tol > 0.0)) throw InvalidInput("tol must be positive");
  if (options.max_iter < 1) throw InvalidInput("max_iter must be at least 1");

  using Clock = std::chrono::steady_clock;
  EngineResult result;
  result.scenarios.push_back(reference_scenario(prob));

  auto master = at_iteration(0, [&] { return solve_master(prob, result.scenarios, options.master); });
  std::vector<double> x = master.x;
  double lb = master.eta;
  double ub = kInf;

  for (std::size_t k = 0;; ++k) {
    const auto start = Clock::now();
    const auto sub = at_iteration(k, [&] { return solve_subproblem(prob, x); });
    ub = std::min(ub, sub.value);

    IterationRecord rec;
    rec.k = k;
    rec.x = x;
    rec.sub_value = sub.value;

    const bool repeat = nearest_scenario(result.scenarios, sub.scenario) <= options.duplicate_tol;
    if (!repeat) {
      result.scenarios.push_back(sub.scenario);
      master = at_iteration(k, [&] { return solve_master(prob, result.scenarios, options.master); });
      x = master.x;
      // Round-off can move eta by a few ulps against the theory.
      lb = std::max(lb, master.eta);
      rec.master_nodes = master.nodes;
      spdlog::debug("master: {} nodes, {} LP iterations", master.nodes, master.lp_iterations);
    }

    rec.ub = ub;
    rec.lb = lb;
    rec.gap = ub - lb;
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    spdlog::info("iter {:>4}  UB {:.10g}  LB {:.10g}  gap {:.3e}  scenarios {}", k, ub, lb, rec.gap,
                 result.scenarios.size());
    if (options.on_iteration) options.on_iteration(rec);
    result.history.push_back(std::move(rec));

    if (repeat) {
      result.status = EngineStatus::converged;
      result.fixed_point = true;
      result.message = "generated scenario repeats a stored one";
      break;
    }
    if (ub - lb <= options.tol) {
      result.status = EngineStatus::converged;
      result.message = "gap within tolerance";
      break;
    }
    if (k + 1 >= options.max_iter) {
      result.status = EngineStatus::max_iterations;
      result.message = fmt::format("stopped after {} iterations", options.max_iter);
      break;
    }
  }

  result.x = std::move(x);
  result.ub = ub;
  result.lb = lb;
  result.gap = ub - lb;
  result.worst = worst_scenario(prob, result.scenarios, result.x);
  return result;
}

SaddleReport verify_saddle(const ObroProblem& prob, const EngineResult& result, double tol,
                           const BranchAndBoundOptions& master) {
  SaddleReport report;

  const auto sub = solve_subproblem(prob, result.x);
  report.inner_excess = sub.value - result.ub;
  report.inner_ok = report.inner_excess <= tol;

  double at_x = 0.0;
  worst_scenario(prob, result.scenarios, result.x, &at_x);
  const auto resolved = solve_master(prob, result.scenarios, master);
  double at_resolved = 0.0;
  worst_scenario(prob, result.scenarios, resolved.x, &at_resolved);
  report.outer_diff = std::abs(at_resolved - at_x);
  report.outer_ok = report.outer_diff <= tol;

  report.fixed_point_distance = nearest_scenario(result.scenarios, sub.scenario);
  report.fixed_point_ok = report.fixed_point_distance <= kFixedPointTolerance;
  return report;
}

}  // namespace obro
