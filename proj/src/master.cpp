#include "obro/master.hpp"

#include <fmt/format.h>

#include "obro/error.hpp"

namespace obro {

MasterModel build_master(const ObroProblem& prob, const std::vector<Scenario>& scenarios) {
  require_valid(prob);
  if (scenarios.empty()) throw InvalidInput("master needs at least one scenario");
  for (std::size_t l = 0; l < scenarios.size(); ++l) {
    try {
      validate_scenario(prob, scenarios[l]);
    } catch (const InvalidInput& e) {
      throw InvalidInput(fmt::format("scenario {}: {}", l, e.what()));
    }
  }

  MasterModel model;
  auto& lp = model.mip.lp;
  lp.sense = ObjectiveSense::minimize;
  for (std::size_t j = 0; j < prob.num_vars(); ++j) {
    lp.add_variable(prob.lower[j], prob.upper[j], 0.0, prob.names.empty() ? std::string{} : prob.names[j]);
  }
  model.eta = lp.add_variable(-kInf, kInf, 1.0, "eta");
  lp.rows = prob.rows;

  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    const auto& part = prob.terms[i].partition();
    const std::size_t n = part.size();
    for (const auto e : prob.terms[i].evals) {
      Sos2Block block{i, e, lp.num_vars(), 0, n};
      for (std::size_t p = 0; p < n; ++p) lp.add_variable(0.0, 1.0, 0.0, fmt::format("alpha{}_{}", e, p));
      block.beta = lp.num_vars();
      for (std::size_t p = 0; p + 1 < n; ++p) {
        model.mip.binaries.push_back(lp.add_variable(0.0, 1.0, 0.0, fmt::format("beta{}_{}", e, p)));
      }

      std::vector<LinearTerm> alpha_sum, beta_sum, link{{e, 1.0}};
      for (std::size_t p = 0; p < n; ++p) {
        alpha_sum.push_back({block.alpha + p, 1.0});
        link.push_back({block.alpha + p, -part[p]});
      }
      for (std::size_t p = 0; p + 1 < n; ++p) beta_sum.push_back({block.beta + p, 1.0});
      lp.add_row(std::move(alpha_sum), RowSense::equal, 1.0, fmt::format("alpha_sum{}", e));
      lp.add_row(std::move(beta_sum), RowSense::equal, 1.0, fmt::format("beta_sum{}", e));
      for (std::size_t p = 0; p < n; ++p) {
        std::vector<LinearTerm> adj{{block.alpha + p, 1.0}};
        if (p > 0) adj.push_back({block.beta + p - 1, -1.0});
        if (p + 1 < n) adj.push_back({block.beta + p, -1.0});
        lp.add_row(std::move(adj), RowSense::less_equal, 0.0, fmt::format("sos{}_{}", e, p));
      }
      lp.add_row(std::move(link), RowSense::equal, 0.0, fmt::format("link{}", e));
      model.blocks.push_back(block);
    }
  }

  for (std::size_t l = 0; l < scenarios.size(); ++l) {
    const auto& scen = scenarios[l];
    std::vector<LinearTerm> cut{{model.eta, 1.0}};
    for (std::size_t j = 0; j < prob.num_vars(); ++j) {
      if (prob.cost[j] != 0.0) cut.push_back({j, -prob.cost[j]});
    }
    double penalty = 0.0;
    for (std::size_t i = 0; i < prob.terms.size(); ++i) penalty += prob.epsilon * scen.deviations[i];
    for (const auto& block : model.blocks) {
      const auto& f = scen.functions[block.term];
      for (std::size_t p = 0; p < block.samples; ++p) {
        if (f[p] != 0.0) cut.push_back({block.alpha + p, -f[p]});
      }
    }
    model.cut_rows.push_back(
        lp.add_row(std::move(cut), RowSense::greater_equal, -penalty, fmt::format("cut{}", l)));
  }
  return model;
}

MasterResult solve_master(const ObroProblem& prob, const std::vector<Scenario>& scenarios,
                          const BranchAndBoundOptions& options) {
  const auto model = build_master(prob, scenarios);
  BranchAndBoundSolver solver(options);
  const auto out = solver.solve(model.mip);
  if (out.status == SolveStatus::infeasible) throw ProblemInfeasible("the decision polyhedron is empty");
  if (!out.optimal()) throw SolverFailure(fmt::format("master MILP ended {}", to_string(out.status)));

  MasterResult result;
  result.x.assign(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(prob.num_vars()));
  result.eta = out.primal[model.eta];
  result.nodes = out.nodes;
  result.lp_iterations = out.iterations;
  return result;
}

}  // namespace obro
