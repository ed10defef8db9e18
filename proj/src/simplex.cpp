#include "obro/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <spdlog/spdlog.h>

#include "obro/error.hpp"

namespace obro {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

// Column r of the identity replaced by w; stored sparse.
struct Eta {
  std::size_t row = 0;
  double pivot = 1.0;
  std::vector<int> index;
  std::vector<double> value;
};

}  // namespace

struct SimplexSolver::Impl {
  SimplexOptions opt;

  std::size_t n = 0;  // structural columns
  std::size_t m = 0;  // rows
  double sign = 1.0;  // +1 minimize, -1 maximize

  // Structural columns, compressed by column. Row activities are implicit -e_i.
  std::vector<int> col_start;
  std::vector<int> col_row;
  std::vector<double> col_val;

  std::vector<double> cost;  // n + m, internal minimization
  std::vector<double> lo;
  std::vector<double> hi;

  Basis basis;
  std::vector<std::size_t> basic;   // position -> variable
  std::vector<double> x;            // n + m

  mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<Eta> etas;

  std::size_t iterations = 0;

  explicit Impl(const SimplexOptions& o) : opt(o) {}

  bool is_structural(std::size_t j) const { return j < n; }

  void load(const LinearProgram& lp) {
    lp.validate();
    n = lp.num_vars();
    m = lp.num_rows();
    sign = lp.sense == ObjectiveSense::minimize ? 1.0 : -1.0;

    std::vector<std::size_t> count(n, 0);
    for (const auto& row : lp.rows) {
      for (const auto& t : row.terms) ++count[t.var];
    }
    col_start.assign(n + 1, 0);
    for (std::size_t j = 0; j < n; ++j) col_start[j + 1] = col_start[j] + static_cast<int>(count[j]);
    col_row.assign(col_start[n], 0);
    col_val.assign(col_start[n], 0.0);
    std::vector<int> fill(col_start.begin(), col_start.end() - 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& t : lp.rows[i].terms) {
        if (t.coef == 0.0) continue;
        const int k = fill[t.var]++;
        col_row[k] = static_cast<int>(i);
        col_val[k] = t.coef;
      }
    }
    // Zero coefficients were skipped; compact each column.
    {
      std::vector<int> start(n + 1, 0);
      std::size_t out = 0;
      for (std::size_t j = 0; j < n; ++j) {
        start[j] = static_cast<int>(out);
        for (int k = col_start[j]; k < fill[j]; ++k) {
          col_row[out] = col_row[k];
          col_val[out] = col_val[k];
          ++out;
        }
      }
      start[n] = static_cast<int>(out);
      col_row.resize(out);
      col_val.resize(out);
      col_start = std::move(start);
    }

    cost.assign(n + m, 0.0);
    lo.assign(n + m, 0.0);
    hi.assign(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      cost[j] = sign * lp.cost[j];
      lo[j] = lp.lower[j];
      hi[j] = lp.upper[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = lp.rows[i];
      lo[n + i] = row.sense == RowSense::less_equal ? -kInf : row.rhs;
      hi[n + i] = row.sense == RowSense::greater_equal ? kInf : row.rhs;
    }
    basis.status.clear();
  }

  double nonbasic_value(std::size_t j) const {
    switch (basis.status[j]) {
      case VarStatus::at_lower: return lo[j];
      case VarStatus::at_upper: return hi[j];
      default: return 0.0;
    }
  }

  // Picks the status a nonbasic variable should take given its bounds.
  VarStatus settle(std::size_t j, VarStatus wanted) const {
    const bool has_lo = std::isfinite(lo[j]);
    const bool has_hi = std::isfinite(hi[j]);
    if (wanted == VarStatus::at_upper && has_hi) return VarStatus::at_upper;
    if (wanted == VarStatus::at_lower && has_lo) return VarStatus::at_lower;
    if (has_lo) return VarStatus::at_lower;
    if (has_hi) return VarStatus::at_upper;
    return VarStatus::at_zero;
  }

  void slack_basis() {
    basis.status.assign(n + m, VarStatus::at_lower);
    for (std::size_t j = 0; j < n; ++j) basis.status[j] = settle(j, VarStatus::at_lower);
    for (std::size_t i = 0; i < m; ++i) basis.status[n + i] = VarStatus::basic;
    collect_basic();
  }

  void collect_basic() {
    basic.clear();
    for (std::size_t j = 0; j < n + m; ++j) {
      if (basis.status[j] == VarStatus::basic) basic.push_back(j);
    }
  }

  bool adopt(const Basis& warm) {
    if (warm.status.size() != n + m) return false;
    const auto basics = static_cast<std::size_t>(
        std::count(warm.status.begin(), warm.status.end(), VarStatus::basic));
    if (basics != m) return false;
    basis = warm;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (basis.status[j] != VarStatus::basic) basis.status[j] = settle(j, basis.status[j]);
    }
    collect_basic();
    return true;
  }

  bool refactor() {
    etas.clear();
    if (m == 0) return true;
    std::vector<Eigen::Triplet<double, int>> triplets;
    triplets.reserve(col_row.size() + m);
    for (std::size_t pos = 0; pos < m; ++pos) {
      const std::size_t j = basic[pos];
      if (is_structural(j)) {
        for (int k = col_start[j]; k < col_start[j + 1]; ++k) {
          triplets.emplace_back(col_row[k], static_cast<int>(pos), col_val[k]);
        }
      } else {
        triplets.emplace_back(static_cast<int>(j - n), static_cast<int>(pos), -1.0);
      }
    }
    SparseMatrix b(static_cast<int>(m), static_cast<int>(m));
    b.setFromTriplets(triplets.begin(), triplets.end());
    b.makeCompressed();
    lu.compute(b);
    return lu.info() == Eigen::Success;
  }

  void ftran(Vector& v) const {
    if (m == 0) return;
    v = lu.solve(v);
    for (const auto& e : etas) {
      const double xr = v[static_cast<int>(e.row)] / e.pivot;
      if (xr != 0.0) {
        for (std::size_t k = 0; k < e.index.size(); ++k) v[e.index[k]] -= e.value[k] * xr;
      }
      v[static_cast<int>(e.row)] = xr;
    }
  }

  void btran(Vector& v) const {
    if (m == 0) return;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double acc = v[static_cast<int>(it->row)];
      for (std::size_t k = 0; k < it->index.size(); ++k) acc -= it->value[k] * v[it->index[k]];
      v[static_cast<int>(it->row)] = acc / it->pivot;
    }
    v = lu.transpose().solve(v);
  }

  void column(std::size_t j, Vector& out) const {
    out.setZero(static_cast<int>(m));
    if (is_structural(j)) {
      for (int k = col_start[j]; k < col_start[j + 1]; ++k) out[col_row[k]] = col_val[k];
    } else {
      out[static_cast<int>(j - n)] = -1.0;
    }
  }

  // x_B = B^{-1} (-N x_N)
  void compute_basic_values() {
    x.assign(n + m, 0.0);
    Vector rhs = Vector::Zero(static_cast<int>(m));
    for (std::size_t j = 0; j < n + m; ++j) {
      if (basis.status[j] == VarStatus::basic) continue;
      const double v = nonbasic_value(j);
      x[j] = v;
      if (v == 0.0) continue;
      if (is_structural(j)) {
        for (int k = col_start[j]; k < col_start[j + 1]; ++k) rhs[col_row[k]] -= col_val[k] * v;
      } else {
        rhs[static_cast<int>(j - n)] += v;
      }
    }
    ftran(rhs);
    for (std::size_t pos = 0; pos < m; ++pos) x[basic[pos]] = rhs[static_cast<int>(pos)];
  }

  double reduced_cost(std::size_t j, const Vector& y, bool phase1) const {
    const double c = phase1 ? 0.0 : cost[j];
    if (!is_structural(j)) return c + y[static_cast<int>(j - n)];
    double d = c;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) d -= y[col_row[k]] * col_val[k];
    return d;
  }

  // Primal infeasibility of basic variable j: -1 below, +1 above, 0 inside.
  int infeasibility(std::size_t j) const {
    if (x[j] < lo[j] - opt.primal_tol) return -1;
    if (x[j] > hi[j] + opt.primal_tol) return 1;
    return 0;
  }

  SolveStatus iterate() {
    const std::size_t total = n + m;
    Vector y(static_cast<int>(m));
    Vector w(static_cast<int>(m));
    std::size_t degenerate_run = 0;
    bool bland = false;
    int refactor_failures = 0;
    bool verified = false;

    auto restart_cold = [&]() {
      slack_basis();
      refactor();
      compute_basic_values();
      bland = false;
      degenerate_run = 0;
    };

    while (true) {
      if (etas.size() >= opt.refactor_interval) {
        if (!refactor()) {
          if (++refactor_failures > 3) throw SolverFailure("simplex basis repeatedly singular");
          restart_cold();
        } else {
          compute_basic_values();
        }
      }
      if (iterations >= opt.max_iterations) return SolveStatus::iteration_limit;

      bool phase1 = false;
      for (std::size_t pos = 0; pos < m; ++pos) {
        if (infeasibility(basic[pos]) != 0) {
          phase1 = true;
          break;
        }
      }
      for (std::size_t pos = 0; pos < m; ++pos) {
        const std::size_t j = basic[pos];
        y[static_cast<int>(pos)] = phase1 ? static_cast<double>(infeasibility(j)) : cost[j];
      }
      btran(y);

      // Pricing.
      std::size_t entering = total;
      double best = 0.0;
      double d_enter = 0.0;
      for (std::size_t j = 0; j < total; ++j) {
        const VarStatus st = basis.status[j];
        if (st == VarStatus::basic || lo[j] == hi[j]) continue;
        const double d = reduced_cost(j, y, phase1);
        bool eligible = false;
        switch (st) {
          case VarStatus::at_lower: eligible = d < -opt.dual_tol; break;
          case VarStatus::at_upper: eligible = d > opt.dual_tol; break;
          case VarStatus::at_zero: eligible = std::abs(d) > opt.dual_tol; break;
          case VarStatus::basic: break;
        }
        if (!eligible) continue;
        if (bland) {
          entering = j;
          d_enter = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          d_enter = d;
        }
      }

      if (entering == total) {
        // Confirm on a fresh factorization before declaring the outcome.
        if (!verified && !etas.empty()) {
          verified = true;
          if (!refactor()) {
            if (++refactor_failures > 3) throw SolverFailure("simplex basis repeatedly singular");
            restart_cold();
          } else {
            compute_basic_values();
          }
          continue;
        }
        return phase1 ? SolveStatus::infeasible : SolveStatus::optimal;
      }
      verified = false;

      column(entering, w);
      ftran(w);
      const double dir = d_enter < 0.0 ? 1.0 : -1.0;

      // Ratio test. rate = d x_B / d t.
      const double flip = (std::isfinite(lo[entering]) && std::isfinite(hi[entering]))
                              ? hi[entering] - lo[entering]
                              : kInf;
      double wmax = 0.0;
      for (std::size_t pos = 0; pos < m; ++pos) wmax = std::max(wmax, std::abs(w[static_cast<int>(pos)]));
      const double piv_tol = std::max(opt.pivot_tol, 1e-11 * wmax);

      // Limit of basic position pos; relaxed adds the Harris tolerance.
      auto limit = [&](std::size_t pos, bool relaxed, double& target) -> double {
        const double rate = -dir * w[static_cast<int>(pos)];
        const std::size_t j = basic[pos];
        const double v = x[j];
        const double tol = relaxed ? opt.primal_tol : 0.0;
        const int inf = infeasibility(j);
        if (rate < 0.0) {
          if (inf > 0) {
            target = hi[j];
            return (v - hi[j] + tol) / -rate;
          }
          if (inf < 0 || !std::isfinite(lo[j])) return kInf;
          target = lo[j];
          return (v - lo[j] + tol) / -rate;
        }
        if (inf < 0) {
          target = lo[j];
          return (lo[j] - v + tol) / rate;
        }
        if (inf > 0 || !std::isfinite(hi[j])) return kInf;
        target = hi[j];
        return (hi[j] - v + tol) / rate;
      };

      std::size_t leave = m;
      double step = kInf;
      double leave_target = 0.0;
      double dummy = 0.0;
      if (bland) {
        for (std::size_t pos = 0; pos < m; ++pos) {
          if (std::abs(w[static_cast<int>(pos)]) <= piv_tol) continue;
          double target = 0.0;
          const double t = std::max(0.0, limit(pos, false, target));
          if (!std::isfinite(t)) continue;
          const bool better = t < step - 1e-12 ||
                              (t <= step + 1e-12 && leave < m && basic[pos] < basic[leave]);
          if (leave == m || better) {
            step = t;
            leave = pos;
            leave_target = target;
          }
        }
      } else {
        double relaxed_step = kInf;
        for (std::size_t pos = 0; pos < m; ++pos) {
          if (std::abs(w[static_cast<int>(pos)]) <= piv_tol) continue;
          relaxed_step = std::min(relaxed_step, limit(pos, true, dummy));
        }
        if (std::isfinite(relaxed_step)) {
          double best_w = 0.0;
          for (std::size_t pos = 0; pos < m; ++pos) {
            const double aw = std::abs(w[static_cast<int>(pos)]);
            if (aw <= piv_tol) continue;
            double target = 0.0;
            const double t = limit(pos, false, target);
            if (t <= relaxed_step && aw > best_w) {
              best_w = aw;
              leave = pos;
              step = std::max(0.0, t);
              leave_target = target;
            }
          }
        }
      }

      if (leave == m && !std::isfinite(flip)) {
        if (phase1) throw SolverFailure("simplex phase 1 found an unbounded ray");
        return SolveStatus::unbounded;
      }

      ++iterations;
      const bool bound_flip = leave == m || flip <= step;
      const double t = bound_flip ? flip : step;

      x[entering] += dir * t;
      if (t != 0.0) {
        for (std::size_t pos = 0; pos < m; ++pos) {
          const double wi = w[static_cast<int>(pos)];
          if (wi != 0.0) x[basic[pos]] -= dir * t * wi;
        }
      }

      if (bound_flip) {
        basis.status[entering] =
            basis.status[entering] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
        x[entering] = nonbasic_value(entering);
      } else {
        const std::size_t out = basic[leave];
        x[out] = leave_target;
        basis.status[out] = (leave_target == lo[out]) ? VarStatus::at_lower : VarStatus::at_upper;
        basis.status[entering] = VarStatus::basic;
        basic[leave] = entering;
        Eta e;
        e.row = leave;
        e.pivot = w[static_cast<int>(leave)];
        for (std::size_t pos = 0; pos < m; ++pos) {
          const double wi = w[static_cast<int>(pos)];
          if (pos != leave && wi != 0.0) {
            e.index.push_back(static_cast<int>(pos));
            e.value.push_back(wi);
          }
        }
        etas.push_back(std::move(e));
      }

      if (t <= 1e-12) {
        if (++degenerate_run >= opt.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
  }

  SolveOutcome run(const Basis* warm) {
    iterations = 0;
    if (!(warm && adopt(*warm))) slack_basis();
    if (!refactor()) {
      slack_basis();
      if (!refactor()) throw SolverFailure("simplex could not factor the slack basis");
    }
    compute_basic_values();

    SolveOutcome out;
    out.status = iterate();
    out.iterations = iterations;
    if (out.status != SolveStatus::optimal) return out;

    out.primal.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += cost[j] * x[j];
    out.objective = sign * obj;

    Vector y(static_cast<int>(m));
    for (std::size_t pos = 0; pos < m; ++pos) y[static_cast<int>(pos)] = cost[basic[pos]];
    btran(y);
    out.dual.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.dual[i] = sign * y[static_cast<int>(i)];
    return out;
  }
};

SimplexSolver::SimplexSolver(SimplexOptions options)
    : options_(options), impl_(std::make_unique<Impl>(options_)) {}

SimplexSolver::~SimplexSolver() = default;

SolveOutcome SimplexSolver::solve(const LinearProgram& lp) {
  load(lp);
  return resolve(nullptr);
}

void SimplexSolver::load(const LinearProgram& lp) { impl_->load(lp); }

void SimplexSolver::set_bounds(std::size_t var, double lo, double hi) {
  if (var >= impl_->n) throw InvalidInput("set_bounds: variable index out of range");
  if (lo > hi) throw InvalidInput("set_bounds: lower bound exceeds upper bound");
  impl_->lo[var] = lo;
  impl_->hi[var] = hi;
}

SolveOutcome SimplexSolver::resolve(const Basis* warm_start) { return impl_->run(warm_start); }

const Basis& SimplexSolver::basis() const { return impl_->basis; }

}  // namespace obro
