#include "obro/branch_and_bound.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include <spdlog/spdlog.h>

#include "obro/error.hpp"

namespace obro {

namespace {

struct Fixing {
  std::size_t var;
  double value;
};

struct Node {
  std::size_t id = 0;
  std::size_t depth = 0;
  double bound = -kInf;  // parent relaxation, internal minimization
  std::vector<Fixing> fixings;
  Basis warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

BranchAndBoundSolver::BranchAndBoundSolver(BranchAndBoundOptions options) : options_(options) {}

SolveOutcome BranchAndBoundSolver::solve(const MixedIntegerProgram& mip) {
  mip.validate();
  stats_ = {};
  const auto& lp = mip.lp;
  const double sign = lp.sense == ObjectiveSense::minimize ? 1.0 : -1.0;

  SimplexSolver simplex(options_.lp);
  simplex.load(lp);

  std::vector<std::size_t> binaries = mip.binaries;
  std::sort(binaries.begin(), binaries.end());
  binaries.erase(std::unique(binaries.begin(), binaries.end()), binaries.end());

  double incumbent = kInf;  // internal minimization
  std::vector<double> incumbent_x;
  bool unbounded = false;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{});
  std::size_t next_id = 1;
  bool warned = false;

  auto pruned = [&](double bound) {
    if (!std::isfinite(incumbent)) return false;
    const double gap = std::max(options_.absolute_gap, options_.relative_gap * std::abs(incumbent));
    return bound >= incumbent - gap;
  };

  std::vector<Fixing> applied;
  while (!open.empty()) {
    if (stats_.nodes >= options_.node_limit) {
      SolveOutcome out;
      out.status = SolveStatus::node_limit;
      out.nodes = stats_.nodes;
      out.iterations = stats_.lp_iterations;
      return out;
    }
    Node node = open.top();
    open.pop();
    if (pruned(node.bound)) continue;

    for (const auto& f : applied) simplex.set_bounds(f.var, lp.lower[f.var], lp.upper[f.var]);
    for (const auto& f : node.fixings) simplex.set_bounds(f.var, f.value, f.value);
    applied = node.fixings;

    const SolveOutcome relax = simplex.resolve(node.warm.status.empty() ? nullptr : &node.warm);
    ++stats_.nodes;
    stats_.lp_iterations += relax.iterations;
    stats_.max_depth = std::max(stats_.max_depth, node.depth);
    if (!warned && stats_.nodes > options_.node_warning) {
      warned = true;
      spdlog::warn("branch and bound explored more than {} nodes", options_.node_warning);
    }

    if (relax.status == SolveStatus::infeasible) continue;
    if (relax.status == SolveStatus::unbounded) {
      unbounded = true;
      break;
    }
    if (relax.status != SolveStatus::optimal) {
      throw SolverFailure(std::string("LP relaxation failed: ") + to_string(relax.status));
    }

    const double value = sign * relax.objective;
    if (node.id == 0) stats_.root_bound = value;
    if (value < node.bound - 1e-7 * std::max(1.0, std::abs(node.bound))) ++stats_.bound_inversions;
    if (pruned(value)) continue;

    std::size_t branch_var = lp.num_vars();
    double best_frac = options_.integrality_tol;
    for (const auto j : binaries) {
      const double v = relax.primal[j];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac) {
        best_frac = frac;
        branch_var = j;
      }
    }

    if (branch_var == lp.num_vars()) {
      if (value < incumbent) {
        incumbent = value;
        incumbent_x = relax.primal;
      }
      continue;
    }

    for (const double side : {0.0, 1.0}) {
      Node child;
      child.id = next_id++;
      child.depth = node.depth + 1;
      child.bound = value;
      child.fixings = node.fixings;
      child.fixings.push_back({branch_var, side});
      child.warm = simplex.basis();
      open.push(std::move(child));
    }
  }

  SolveOutcome out;
  out.nodes = stats_.nodes;
  out.iterations = stats_.lp_iterations;
  if (unbounded) {
    out.status = SolveStatus::unbounded;
    return out;
  }
  if (incumbent_x.empty()) {
    out.status = SolveStatus::infeasible;
    return out;
  }
  for (const auto j : binaries) incumbent_x[j] = std::round(incumbent_x[j]);
  out.status = SolveStatus::optimal;
  out.primal = std::move(incumbent_x);
  out.objective = objective_value(lp, out.primal);
  return out;
}

}  // namespace obro
