#include "obro/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "obro/error.hpp"

namespace obro {

std::size_t LinearProgram::add_variable(double lo, double hi, double c, std::string name) {
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  names.push_back(std::move(name));
  return cost.size() - 1;
}

std::size_t LinearProgram::add_row(std::vector<LinearTerm> terms, RowSense row_sense, double rhs,
                                   std::string name) {
  rows.push_back(LinearRow{std::move(terms), row_sense, rhs, std::move(name)});
  return rows.size() - 1;
}

void LinearProgram::validate() const {
  const std::size_t n = cost.size();
  if (lower.size() != n || upper.size() != n) {
    throw InvalidInput("bound vectors do not match the variable count");
  }
  if (!names.empty() && names.size() != n) {
    throw InvalidInput("name vector does not match the variable count");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isnan(cost[j]) || std::isinf(cost[j])) {
      throw InvalidInput(fmt::format("cost of variable {} is not finite", j));
    }
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
      throw InvalidInput(fmt::format("variable {} has invalid bounds [{}, {}]", j, lower[j], upper[j]));
    }
    if (lower[j] == kInf || upper[j] == -kInf) {
      throw InvalidInput(fmt::format("variable {} has an empty infinite bound", j));
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!std::isfinite(rows[i].rhs)) {
      throw InvalidInput(fmt::format("row {} has a non-finite right-hand side", i));
    }
    for (const auto& t : rows[i].terms) {
      if (t.var >= n) {
        throw InvalidInput(fmt::format("row {} references variable {} of {}", i, t.var, n));
      }
      if (!std::isfinite(t.coef)) {
        throw InvalidInput(fmt::format("row {} has a non-finite coefficient", i));
      }
    }
  }
}

void MixedIntegerProgram::validate() const {
  lp.validate();
  for (const auto j : binaries) {
    if (j >= lp.num_vars()) {
      throw InvalidInput(fmt::format("binary index {} out of range", j));
    }
    if (lp.lower[j] < 0.0 || lp.upper[j] > 1.0) {
      throw InvalidInput(fmt::format("binary variable {} has bounds outside [0, 1]", j));
    }
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration-limit";
    case SolveStatus::node_limit: return "node-limit";
  }
  return "unknown";
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    worst = std::max({worst, lp.lower[j] - x[j], x[j] - lp.upper[j]});
  }
  for (const auto& row : lp.rows) {
    double activity = 0.0;
    for (const auto& t : row.terms) activity += t.coef * x[t.var];
    const double diff = activity - row.rhs;
    switch (row.sense) {
      case RowSense::less_equal: worst = std::max(worst, diff); break;
      case RowSense::greater_equal: worst = std::max(worst, -diff); break;
      case RowSense::equal: worst = std::max(worst, std::abs(diff)); break;
    }
  }
  return worst;
}

double objective_value(const LinearProgram& lp, const std::vector<double>& x) {
  double v = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) v += lp.cost[j] * x[j];
  return v;
}

namespace {

std::string var_name(const LinearProgram& lp, std::size_t j) {
  if (j < lp.names.size() && !lp.names[j].empty()) {
    std::string s = lp.names[j];
    std::replace_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == ':'; }, '_');
    return s;
  }
  return fmt::format("x{}", j);
}

void write_terms(std::ostream& os, const LinearProgram& lp, const std::vector<LinearTerm>& terms) {
  if (terms.empty()) {
    os << " 0 " << var_name(lp, 0);
    return;
  }
  for (const auto& t : terms) {
    fmt::print(os, " {} {:.17g} {}", t.coef < 0 ? '-' : '+', std::abs(t.coef), var_name(lp, t.var));
  }
}

}  // namespace

void write_lp_text(std::ostream& os, const LinearProgram& lp,
                   const std::vector<std::size_t>& binaries) {
  os << (lp.sense == ObjectiveSense::minimize ? "Minimize\n" : "Maximize\n") << " obj:";
  std::vector<LinearTerm> obj;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    if (lp.cost[j] != 0.0) obj.push_back({j, lp.cost[j]});
  }
  write_terms(os, lp, obj);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const auto& row = lp.rows[i];
    os << ' ' << (row.name.empty() ? fmt::format("c{}", i) : row.name) << ':';
    write_terms(os, lp, row.terms);
    const char* op = row.sense == RowSense::less_equal ? "<=" : row.sense == RowSense::equal ? "=" : ">=";
    fmt::print(os, " {} {:.17g}\n", op, row.rhs);
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const auto name = var_name(lp, j);
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    if (lo == -kInf && hi == kInf) {
      fmt::print(os, " {} free\n", name);
    } else if (hi == kInf) {
      fmt::print(os, " {} >= {:.17g}\n", name, lo);
    } else if (lo == -kInf) {
      fmt::print(os, " -inf <= {} <= {:.17g}\n", name, hi);
    } else {
      fmt::print(os, " {:.17g} <= {} <= {:.17g}\n", lo, name, hi);
    }
  }
  if (!binaries.empty()) {
    os << "Binaries\n";
    for (const auto j : binaries) os << ' ' << var_name(lp, j) << '\n';
  }
  os << "End\n";
}

void write_lp_text(std::ostream& os, const MixedIntegerProgram& mip) {
  write_lp_text(os, mip.lp, mip.binaries);
}

}  // namespace obro
