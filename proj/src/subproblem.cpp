#include "obro/subproblem.hpp"

#include <cmath>

#include <fmt/format.h>

#include "obro/error.hpp"
#include "obro/simplex.hpp"

namespace obro {

SubproblemModel build_subproblem(const ObroProblem& prob, const std::vector<double>& x) {
  require_valid(prob);
  require_feasible(prob, x);

  SubproblemModel model;
  auto& lp = model.lp;
  lp.sense = ObjectiveSense::maximize;
  for (std::size_t j = 0; j < x.size(); ++j) model.constant += prob.cost[j] * x[j];

  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    const auto& term = prob.terms[i];
    const auto& spec = term.spec;
    const auto& ref = spec.reference;
    const auto& part = ref.partition();
    const std::size_t n = part.size();

    SubproblemBlock block;
    block.samples = n;
    block.values = lp.num_vars();
    for (std::size_t p = 0; p < n; ++p) lp.add_variable(-kInf, kInf, 0.0, fmt::format("f{}_{}", i, p));
    block.slacks = lp.num_vars();
    for (std::size_t p = 0; p < n; ++p) lp.add_variable(0.0, kInf, 0.0, fmt::format("s{}_{}", i, p));
    block.deviation = lp.add_variable(-kInf, kInf, -prob.epsilon, fmt::format("D{}", i));

    for (const auto e : term.evals) {
      const auto c = interp_coefficients(part, x[e]);
      lp.cost[block.values + c.segment] += c.alpha_lo;
      lp.cost[block.values + c.segment + 1] += c.alpha_hi;
    }

    for (std::size_t p = 0; p < n; ++p) {
      const auto f = block.values + p;
      const auto s = block.slacks + p;
      lp.add_row({{f, 1.0}}, RowSense::less_equal, ref[p] + spec.delta_max, fmt::format("sup_hi{}_{}", i, p));
      lp.add_row({{f, 1.0}}, RowSense::greater_equal, ref[p] - spec.delta_max, fmt::format("sup_lo{}_{}", i, p));
      lp.add_row({{s, 1.0}, {f, -1.0}}, RowSense::greater_equal, -ref[p], fmt::format("abs_hi{}_{}", i, p));
      lp.add_row({{s, 1.0}, {f, 1.0}}, RowSense::greater_equal, ref[p], fmt::format("abs_lo{}_{}", i, p));
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      const double cap = spec.lip_ratio * std::abs(ref[p] - ref[p + 1]);
      const auto a = block.values + p;
      const auto b = a + 1;
      lp.add_row({{a, 1.0}, {b, -1.0}}, RowSense::less_equal, cap, fmt::format("ratio_hi{}_{}", i, p));
      lp.add_row({{a, 1.0}, {b, -1.0}}, RowSense::greater_equal, -cap, fmt::format("ratio_lo{}_{}", i, p));
    }

    lp.add_row({{block.deviation, 1.0}}, RowSense::less_equal, spec.dev_max, fmt::format("dev_cap{}", i));
    std::vector<LinearTerm> trap{{block.deviation, 1.0}};
    for (std::size_t p = 0; p < n; ++p) {
      double w = 0.0;
      if (p > 0) w += 0.5 * (part[p] - part[p - 1]);
      if (p + 1 < n) w += 0.5 * (part[p + 1] - part[p]);
      trap.push_back({block.slacks + p, -w});
    }
    lp.add_row(std::move(trap), RowSense::equal, 0.0, fmt::format("dev_def{}", i));

    model.blocks.push_back(block);
  }
  return model;
}

SubproblemResult solve_subproblem(const ObroProblem& prob, const std::vector<double>& x, LpSolver* solver) {
  const auto model = build_subproblem(prob, x);
  SimplexSolver fallback;
  LpSolver& lp_solver = solver ? *solver : fallback;
  const auto out = lp_solver.solve(model.lp);
  if (!out.optimal()) {
    throw SolverFailure(fmt::format("subproblem LP ended {} although the reference is feasible",
                                    to_string(out.status)));
  }

  SubproblemResult result;
  result.iterations = out.iterations;
  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    const auto& block = model.blocks[i];
    const auto& ref = prob.terms[i].spec.reference;
    std::vector<double> values(out.primal.begin() + static_cast<std::ptrdiff_t>(block.values),
                               out.primal.begin() + static_cast<std::ptrdiff_t>(block.values + block.samples));
    SampledFunction f(ref.partition(), std::move(values));
    result.scenario.deviations.push_back(trapezoid_deviation(f, ref));
    result.scenario.functions.push_back(std::move(f));
  }
  try {
    validate_scenario(prob, result.scenario);
  } catch (const InvalidInput& e) {
    throw SolverFailure(fmt::format("subproblem returned an inadmissible scenario: {}", e.what()));
  }
  result.value = out.objective + model.constant;
  return result;
}

}  // namespace obro
