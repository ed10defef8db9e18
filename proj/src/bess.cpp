#include "obro/bess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "obro/error.hpp"
#include "obro/master.hpp"

namespace obro::bess {

double degradation_curve(double power, double dt, double e_max, double a, double b) {
  if (!(e_max > 0.0)) throw InvalidInput("E_max must be positive");
  if (!(dt > 0.0)) throw InvalidInput("dt must be positive");
  const double dod = std::abs(power) * dt / e_max;
  if (dod > 1.0 + 1e-12) throw InvalidInput(fmt::format("depth of discharge {} exceeds 1", dod));
  return a * dod - b * dod * dod;
}

double degradation_reference(double power, double dt, double e_max) {
  return degradation_curve(power, dt, e_max, 9.62, 4.7);
}

std::size_t FeederModel::index_of(int node) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) throw InvalidInput(fmt::format("unknown feeder node {}", node));
  return static_cast<std::size_t>(it - nodes.begin());
}

FeederModel build_feeder(const FeederSpec& spec) {
  if (spec.lines.empty()) throw InvalidInput("feeder has no lines");
  std::map<int, const Line*> parent_line;
  for (const auto& line : spec.lines) {
    if (line.child == 0) throw InvalidInput("the substation cannot be a line's child");
    if (line.child == line.parent) throw InvalidInput(fmt::format("line {}-{} is a self loop", line.parent, line.child));
    if (!(line.r > 0.0) || !(line.x >= 0.0) || !std::isfinite(line.r) || !std::isfinite(line.x)) {
      throw InvalidInput(fmt::format("line {}-{} needs r > 0 and x >= 0", line.parent, line.child));
    }
    if (!parent_line.emplace(line.child, &line).second) {
      throw InvalidInput(fmt::format("node {} has more than one parent", line.child));
    }
  }

  FeederModel model;
  model.lines = spec.lines;
  model.v_source = spec.v_source;
  for (const auto& [node, line] : parent_line) model.nodes.push_back(node);

  // Lines on the path substation -> node, by child id.
  std::vector<std::set<int>> paths;
  for (const int node : model.nodes) {
    std::set<int> path;
    int cur = node;
    while (cur != 0) {
      if (!path.insert(cur).second) throw InvalidInput(fmt::format("feeder has a cycle through node {}", cur));
      const auto it = parent_line.find(cur);
      if (it == parent_line.end()) throw InvalidInput(fmt::format("node {} is not connected to the substation", cur));
      cur = it->second->parent;
    }
    paths.push_back(std::move(path));
  }

  const std::size_t n = model.nodes.size();
  model.R.assign(n, std::vector<double>(n, 0.0));
  model.X.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (const int c : paths[i]) {
        if (!paths[j].count(c)) continue;
        model.R[i][j] += 2.0 * parent_line[c]->r;
        model.X[i][j] += 2.0 * parent_line[c]->x;
      }
    }
  }
  return model;
}

void validate_inputs(const FeederModel& feeder, const ScheduleInputs& in) {
  const std::size_t n = feeder.nodes.size();
  if (in.slots == 0) throw InvalidInput("at least one timeslot is required");
  if (!(in.dt > 0.0)) throw InvalidInput("dt must be positive");
  auto check_series = [&](const std::vector<std::vector<double>>& s, const char* what) {
    if (s.size() != in.slots) throw InvalidInput(fmt::format("{} has {} slots, expected {}", what, s.size(), in.slots));
    for (const auto& row : s) {
      if (row.size() != n) throw InvalidInput(fmt::format("{} rows need one value per node ({})", what, n));
      for (const double v : row) {
        if (!std::isfinite(v)) throw InvalidInput(fmt::format("{} contains a non-finite value", what));
      }
    }
  };
  check_series(in.pv, "pv");
  check_series(in.load_p, "load_p");
  check_series(in.load_q, "load_q");
  if (!(in.v_min < 1.0 && 1.0 < in.v_max)) throw InvalidInput("voltage limits must satisfy v_min < 1 < v_max");
  if (!(in.w_v >= 0.0)) throw InvalidInput("w_v must be nonnegative");
  if (!(in.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (in.batteries.empty()) throw InvalidInput("at least one battery is required");
  std::set<int> seen;
  for (const auto& b : in.batteries) {
    feeder.index_of(b.node);
    if (!seen.insert(b.node).second) throw InvalidInput(fmt::format("two batteries at node {}", b.node));
    if (!(b.p_min < b.p_max)) throw InvalidInput(fmt::format("battery {} needs p_min < p_max", b.node));
    if (!(b.e_max > 0.0) || b.e0 < 0.0 || b.e0 > b.e_max) {
      throw InvalidInput(fmt::format("battery {} needs 0 <= e0 <= e_max, e_max > 0", b.node));
    }
    if (std::max(std::abs(b.p_min), std::abs(b.p_max)) * in.dt > b.e_max * (1.0 + 1e-12)) {
      throw InvalidInput(fmt::format("battery {} power range gives a depth of discharge above 1", b.node));
    }
  }
}

BessProblem assemble_bess_problem(const FeederModel& feeder, const ScheduleInputs& in, double a, double b) {
  validate_inputs(feeder, in);
  const std::size_t n = feeder.nodes.size();
  const std::size_t nb = in.batteries.size();
  const std::size_t T = in.slots;

  BessProblem bp;
  auto& prob = bp.problem;
  prob.epsilon = in.epsilon;

  auto& bat_pos = bp.battery_pos;
  for (const auto& bat : in.batteries) bat_pos.push_back(feeder.index_of(bat.node));

  bp.power.assign(nb, {});
  for (std::size_t k = 0; k < nb; ++k) {
    const auto& bat = in.batteries[k];
    for (std::size_t t = 0; t < T; ++t) {
      bp.power[k].push_back(prob.add_variable(bat.p_min, bat.p_max, 0.0, fmt::format("P_{}_{}", bat.node, t)));
    }
  }
  bp.aux.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < T; ++t) {
      bp.aux[i].push_back(prob.add_variable(0.0, kInf, in.w_v, fmt::format("u_{}_{}", feeder.nodes[i], t)));
    }
  }

  bp.base_voltage.assign(T, std::vector<double>(n, feeder.v_source));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = feeder.v_source;
      for (std::size_t j = 0; j < n; ++j) {
        v += feeder.R[i][j] * (in.pv[t][j] - in.load_p[t][j]) - feeder.X[i][j] * in.load_q[t][j];
      }
      bp.base_voltage[t][i] = v;
    }
  }

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v0 = bp.base_voltage[t][i];
      // V = v0 - sum_b R[i][b] P_b
      std::vector<LinearTerm> minus_v;
      for (std::size_t k = 0; k < nb; ++k) {
        const double r = feeder.R[i][bat_pos[k]];
        if (r != 0.0) minus_v.push_back({bp.power[k][t], r});
      }
      const auto node = feeder.nodes[i];
      if (!minus_v.empty() || v0 > in.v_max || v0 < in.v_min) {
        prob.rows.push_back({minus_v, RowSense::greater_equal, v0 - in.v_max, fmt::format("vmax_{}_{}", node, t)});
        prob.rows.push_back({minus_v, RowSense::less_equal, v0 - in.v_min, fmt::format("vmin_{}_{}", node, t)});
      }
      std::vector<LinearTerm> above{{bp.aux[i][t], 1.0}}, below{{bp.aux[i][t], 1.0}};
      for (const auto& term : minus_v) {
        above.push_back({term.var, term.coef});
        below.push_back({term.var, -term.coef});
      }
      prob.rows.push_back({std::move(above), RowSense::greater_equal, v0 - 1.0, fmt::format("dev_hi_{}_{}", node, t)});
      prob.rows.push_back({std::move(below), RowSense::greater_equal, 1.0 - v0, fmt::format("dev_lo_{}_{}", node, t)});
    }
  }

  for (std::size_t k = 0; k < nb; ++k) {
    const auto& bat = in.batteries[k];
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<LinearTerm> energy;
      for (std::size_t s = 0; s <= t; ++s) energy.push_back({bp.power[k][s], in.dt});
      prob.rows.push_back({energy, RowSense::greater_equal, -bat.e0, fmt::format("soc_lo_{}_{}", bat.node, t)});
      prob.rows.push_back({energy, RowSense::less_equal, bat.e_max - bat.e0, fmt::format("soc_hi_{}_{}", bat.node, t)});
    }

    const auto part = make_partition(bat.p_min, bat.p_max, bat.scheme ? *bat.scheme : in.scheme);
    auto ref = sample_reference(
        [&](double p) { return degradation_curve(p, in.dt, bat.e_max, a, b); }, part);
    UncertainTerm term{fmt::format("battery_{}", bat.node),
                       NeighborhoodSpec{std::move(ref), bat.delta_max, bat.dev_max, bat.lip_ratio},
                       bp.power[k]};
    prob.terms.push_back(std::move(term));
  }
  return bp;
}

std::vector<std::vector<double>> voltages(const FeederModel& feeder, const BessProblem& bp,
                                          const std::vector<double>& x) {
  auto v = bp.base_voltage;
  const std::size_t n = feeder.nodes.size();
  for (std::size_t k = 0; k < bp.power.size(); ++k) {
    const auto pos = bp.battery_pos[k];
    for (std::size_t t = 0; t < v.size(); ++t) {
      for (std::size_t i = 0; i < n; ++i) v[t][i] -= feeder.R[i][pos] * x[bp.power[k][t]];
    }
  }
  return v;
}

std::vector<std::vector<double>> state_of_charge(const ScheduleInputs& in, const BessProblem& bp,
                                                 const std::vector<double>& x) {
  std::vector<std::vector<double>> soc(bp.power.size());
  for (std::size_t k = 0; k < bp.power.size(); ++k) {
    double e = in.batteries[k].e0;
    for (const auto j : bp.power[k]) {
      e += x[j] * in.dt;
      soc[k].push_back(e);
    }
  }
  return soc;
}

double degradation_sum(const ScheduleInputs& in, const BessProblem& bp, const std::vector<double>& x, double a,
                       double b) {
  double total = 0.0;
  for (std::size_t k = 0; k < bp.power.size(); ++k) {
    for (const auto j : bp.power[k]) total += degradation_curve(x[j], in.dt, in.batteries[k].e_max, a, b);
  }
  return total;
}

ParametricResult parametric_baseline(const FeederModel& feeder, const ScheduleInputs& in, double a_lo,
                                     double a_hi, double b_lo, double b_hi) {
  if (!(0.0 < a_lo && a_lo <= a_hi) || !(0.0 < b_lo && b_lo <= b_hi)) {
    throw InvalidInput("parametric ranges need 0 < lo <= hi");
  }
  ParametricResult result;
  result.a = a_hi;
  result.b = b_lo;
  result.problem = assemble_bess_problem(feeder, in, result.a, result.b);
  const auto master = solve_master(result.problem.problem, {reference_scenario(result.problem.problem)});
  result.x = master.x;
  result.value = master.eta;
  return result;
}

}  // namespace obro::bess
