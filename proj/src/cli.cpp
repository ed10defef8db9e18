#include "obro/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "obro/bess.hpp"
#include "obro/config.hpp"
#include "obro/csv.hpp"
#include "obro/engine.hpp"
#include "obro/error.hpp"
#include "obro/master.hpp"
#include "obro/oracle.hpp"

namespace obro::cli {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw InvalidInput(fmt::format("cannot write '{}'", path.string()));
  f << content;
}

std::string iterations_csv(const EngineResult& res, bool timing) {
  std::ostringstream os;
  os << "k,UB,LB,gap" << (timing ? ",wall_ms" : "") << '\n';
  for (const auto& r : res.history) {
    os << r.k << ',' << csv_number(r.ub) << ',' << csv_number(r.lb) << ',' << csv_number(r.gap);
    if (timing) os << ',' << csv_number(r.wall_ms);
    os << '\n';
  }
  return os.str();
}

std::string worst_functions_csv(const ObroProblem& prob, const EngineResult& res) {
  std::ostringstream os;
  os << "term,sample_x,sample_f,reference_f\n";
  const auto& scen = res.scenarios.at(res.worst);
  for (std::size_t i = 0; i < prob.terms.size(); ++i) {
    const auto& f = scen.functions[i];
    const auto& ref = prob.terms[i].spec.reference;
    for (std::size_t p = 0; p < f.size(); ++p) {
      os << prob.terms[i].name << ',' << csv_number(f.partition()[p]) << ',' << csv_number(f[p]) << ','
         << csv_number(ref[p]) << '\n';
    }
  }
  return os.str();
}

std::string solution_csv(const ObroProblem& prob, const std::vector<double>& x) {
  std::ostringstream os;
  os << "variable,value\n";
  for (std::size_t j = 0; j < x.size(); ++j) {
    os << (prob.names.empty() || prob.names[j].empty() ? fmt::format("x{}", j) : prob.names[j]) << ','
       << csv_number(x[j]) << '\n';
  }
  return os.str();
}

std::string summary_csv(const EngineResult& res, const std::string& label, const std::string& scheme) {
  std::ostringstream os;
  os << "key,value\n";
  os << "status," << to_string(res.status) << '\n';
  os << "iterations," << res.history.size() << '\n';
  os << "scenarios," << res.scenarios.size() << '\n';
  os << "UB," << csv_number(res.ub) << '\n';
  os << "LB," << csv_number(res.lb) << '\n';
  os << "gap," << csv_number(res.gap) << '\n';
  os << "fixed_point," << (res.fixed_point ? "yes" : "no") << '\n';
  if (!scheme.empty()) os << "scheme," << scheme << '\n';
  if (!label.empty()) os << "data," << '"' << label << '"' << '\n';
  return os.str();
}

std::string schedule_csv(const bess::FeederModel& feeder, const bess::ScheduleInputs& in,
                         const bess::BessProblem& bp, const std::vector<double>& x) {
  const auto v = bess::voltages(feeder, bp, x);
  const auto soc = bess::state_of_charge(in, bp, x);
  std::ostringstream os;
  os << "node,timeslot,P_b,V,E_b\n";
  for (std::size_t i = 0; i < feeder.nodes.size(); ++i) {
    std::optional<std::size_t> bat;
    for (std::size_t k = 0; k < bp.battery_pos.size(); ++k) {
      if (bp.battery_pos[k] == i) bat = k;
    }
    for (std::size_t t = 0; t < in.slots; ++t) {
      os << feeder.nodes[i] << ',' << t << ',' << csv_number(bat ? x[bp.power[*bat][t]] : 0.0) << ','
         << csv_number(v[t][i]) << ',' << (bat ? csv_number(soc[*bat][t]) : "") << '\n';
    }
  }
  return os.str();
}

int engine_exit(const EngineResult& res) {
  return res.status == EngineStatus::converged ? kOk : kMaxIterations;
}

EngineOptions engine_options(const Config& cfg, std::optional<double> tol, std::optional<std::size_t> max_iter) {
  EngineOptions opts;
  opts.tol = tol.value_or(cfg.engine.tol);
  opts.max_iter = max_iter.value_or(cfg.engine.max_iter);
  return opts;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\nshrink the instance (fewer samples, evaluation points or levels)\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(args.config);
    const auto prob = problem_from_config(cfg);
    require_valid(prob);
    const auto res = run(prob, engine_options(cfg, args.tol, args.max_iter));
    fs::create_directories(args.out);
    write_file(args.out / "iterations.csv", iterations_csv(res, args.timing));
    write_file(args.out / "worst_functions.csv", worst_functions_csv(prob, res));
    write_file(args.out / "solution.csv", solution_csv(prob, res.x));
    write_file(args.out / "summary.csv",
               summary_csv(res, cfg.is_bess() ? cfg.bess->inputs.data_label : std::string{}, {}));
    out << fmt::format("{} after {} iterations: UB {} LB {} gap {}\n", to_string(res.status), res.history.size(),
                       csv_number(res.ub), csv_number(res.lb), csv_number(res.gap));
    return engine_exit(res);
  });
}

int cmd_bess(const BessArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(args.config);
    if (!cfg.is_bess()) throw InvalidInput("bess needs a config with a feeder and a schedule");
    const auto& bc = *cfg.bess;
    const auto scheme = args.scheme.empty() ? bc.scheme : args.scheme;
    const auto feeder = bess::build_feeder(bc.feeder);
    fs::create_directories(args.out);

    if (scheme == "parametric") {
      auto in = bc.inputs;
      for (auto& b : in.batteries) b.scheme = named_scheme(scheme, b.p_min, b.p_max);
      const auto res = bess::parametric_baseline(feeder, in, bc.a_lo, bc.a_hi, bc.b_lo, bc.b_hi);
      write_file(args.out / "schedule.csv", schedule_csv(feeder, in, res.problem, res.x));
      std::ostringstream os;
      os << "a,b,value,degradation\n"
         << csv_number(res.a) << ',' << csv_number(res.b) << ',' << csv_number(res.value) << ','
         << csv_number(bess::degradation_sum(in, res.problem, res.x, res.a, res.b)) << '\n';
      write_file(args.out / "parametric.csv", os.str());
      out << fmt::format("parametric worst case a={} b={} value {}\n", csv_number(res.a), csv_number(res.b),
                         csv_number(res.value));
      return static_cast<int>(kOk);
    }

    auto in = bc.inputs;
    for (auto& b : in.batteries) b.scheme = named_scheme(scheme, b.p_min, b.p_max);
    const auto bp = bess::assemble_bess_problem(feeder, in);
    const auto res = run(bp.problem, engine_options(cfg, {}, {}));
    write_file(args.out / "iterations.csv", iterations_csv(res, args.timing));
    write_file(args.out / "worst_functions.csv", worst_functions_csv(bp.problem, res));
    write_file(args.out / "schedule.csv", schedule_csv(feeder, in, bp, res.x));
    write_file(args.out / "summary.csv", summary_csv(res, in.data_label, scheme));
    std::ostringstream parts;
    parts << "term,points\n";
    for (const auto& t : bp.problem.terms) parts << t.name << ',' << t.partition().size() << '\n';
    write_file(args.out / "partitions.csv", parts.str());
    out << fmt::format("{} [{}] after {} iterations: UB {} LB {} gap {}\n", to_string(res.status), scheme,
                       res.history.size(), csv_number(res.ub), csv_number(res.lb), csv_number(res.gap));
    return engine_exit(res);
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto cfg = load_config(args.config);
    const auto prob = problem_from_config(cfg);
    require_valid(prob);
    const auto res = run(prob, engine_options(cfg, {}, {}));

    BruteForceOptions bf_opts;
    bf_opts.levels = args.levels.value_or(cfg.verify_levels);
    const auto master = enumerate_master(prob, res.scenarios);
    const auto bf = brute_force_subproblem(prob, res.x, bf_opts);

    const auto saddle = verify_saddle(prob, res, 1e-4);
    const auto milp = solve_master(prob, res.scenarios);

    struct Check {
      std::string name;
      bool ok;
      std::string detail;
    };
    const double lp_value = saddle.inner_excess + res.ub;
    std::vector<Check> checks{
        {"engine converged", res.status == EngineStatus::converged, to_string(res.status)},
        {"inner optimality", saddle.inner_ok, fmt::format("excess {:.3g}", saddle.inner_excess)},
        {"outer optimality", saddle.outer_ok, fmt::format("difference {:.3g}", saddle.outer_diff)},
        {"fixed point", saddle.fixed_point_ok, fmt::format("distance {:.3g}", saddle.fixed_point_distance)},
        {"subproblem oracle", bf.value <= lp_value + 1e-9 && bf.value >= lp_value - bf.error_bound - 1e-9,
         fmt::format("grid {:.10g} vs LP {:.10g} (allowed {:.3g})", bf.value, lp_value, bf.error_bound)},
        {"master oracle", std::abs(master.value - milp.eta) <= 1e-6,
         fmt::format("enumeration {:.10g} vs MILP {:.10g}", master.value, milp.eta)},
    };
    bool all = true;
    for (const auto& c : checks) {
      out << fmt::format("{:<18} {}  {}\n", c.name, c.ok ? "PASS" : "FAIL", c.detail);
      all = all && c.ok;
    }
    return all ? kOk : kFailure;
  });
}

void configure_logging() {
  const char* env = std::getenv("OBRO_LOG");
  const std::string level = env ? env : "";
  if (level == "quiet") {
    spdlog::set_level(spdlog::level::off);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else if (level == "trace") {
    spdlog::set_level(spdlog::level::trace);
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
}

}  // namespace obro::cli
