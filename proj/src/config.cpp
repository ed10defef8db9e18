#include "obro/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "obro/error.hpp"

namespace obro {

namespace {

using json = nlohmann::json;

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t idx) { return fmt::format("{}/{}", ptr, idx); }

const json& require(const json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(ptr, key), "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& ptr) {
  if (v.is_null()) throw ConfigError(ptr, "expected a number");
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  if (!v.is_number()) throw ConfigError(ptr, "expected a number");
  return v.get<double>();
}

double number(const json& obj, const std::string& ptr, const char* key, std::optional<double> fallback = {}) {
  if (!obj.is_object()) throw ConfigError(ptr.empty() ? "/" : ptr, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ConfigError(child(ptr, key), "missing required field");
  }
  return as_number(*it, child(ptr, key));
}

std::size_t count(const json& obj, const std::string& ptr, const char* key, std::size_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
    throw ConfigError(child(ptr, key), "expected a nonnegative integer");
  }
  return it->get<std::size_t>();
}

std::string text(const json& obj, const std::string& ptr, const char* key, std::string fallback = {}) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError(child(ptr, key), "expected a string");
  return it->get<std::string>();
}

const json& array(const json& obj, const std::string& ptr, const char* key) {
  const auto& v = require(obj, ptr, key);
  if (!v.is_array()) throw ConfigError(child(ptr, key), "expected an array");
  return v;
}

std::vector<double> numbers(const json& arr, const std::string& ptr) {
  if (!arr.is_array()) throw ConfigError(ptr, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(as_number(arr[k], child(ptr, k)));
  return out;
}

std::vector<std::vector<double>> matrix(const json& arr, const std::string& ptr) {
  if (!arr.is_array()) throw ConfigError(ptr, "expected an array");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(numbers(arr[k], child(ptr, k)));
  return out;
}

SegmentationScheme parse_scheme(const json& obj, const std::string& ptr) {
  if (obj.contains("pieces")) {
    HeterogeneousScheme h;
    const auto& pieces = array(obj, ptr, "pieces");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const auto p = child(child(ptr, "pieces"), k);
      h.pieces.push_back({number(pieces[k], p, "lower"), number(pieces[k], p, "upper"), number(pieces[k], p, "step")});
    }
    return h;
  }
  return EvenScheme{number(obj, ptr, "step")};
}

Partition parse_partition(const json& obj, const std::string& ptr) {
  try {
    if (obj.contains("points")) return Partition(numbers(obj["points"], child(ptr, "points")));
    return make_partition(number(obj, ptr, "lower"), number(obj, ptr, "upper"), parse_scheme(obj, ptr));
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(ptr, e.what());
  }
}

RowSense parse_sense(const json& obj, const std::string& ptr) {
  const auto s = text(obj, ptr, "sense", "<=");
  if (s == "<=" || s == "le") return RowSense::less_equal;
  if (s == ">=" || s == "ge") return RowSense::greater_equal;
  if (s == "=" || s == "==" || s == "eq") return RowSense::equal;
  throw ConfigError(child(ptr, "sense"), fmt::format("unknown row sense '{}'", s));
}

ObroProblem parse_problem(const json& root) {
  ObroProblem prob;
  std::map<std::string, std::size_t> index;

  const auto& vars = array(root, "", "variables");
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto ptr = child("/variables", j);
    const auto name = text(vars[j], ptr, "name", fmt::format("x{}", j));
    if (!index.emplace(name, j).second) throw ConfigError(child(ptr, "name"), fmt::format("duplicate variable '{}'", name));
    prob.add_variable(number(vars[j], ptr, "lower", 0.0), number(vars[j], ptr, "upper", kInf),
                      number(vars[j], ptr, "cost", 0.0), name);
  }

  auto var_ref = [&](const json& v, const std::string& ptr) -> std::size_t {
    if (v.is_string()) {
      const auto it = index.find(v.get<std::string>());
      if (it == index.end()) throw ConfigError(ptr, fmt::format("unknown variable '{}'", v.get<std::string>()));
      return it->second;
    }
    if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
      const auto j = v.get<std::size_t>();
      if (j >= prob.num_vars()) throw ConfigError(ptr, "variable index out of range");
      return j;
    }
    throw ConfigError(ptr, "expected a variable name or index");
  };

  if (root.contains("rows")) {
    const auto& rows = array(root, "", "rows");
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto ptr = child("/rows", i);
      LinearRow row;
      row.name = text(rows[i], ptr, "name");
      row.sense = parse_sense(rows[i], ptr);
      row.rhs = number(rows[i], ptr, "rhs");
      const auto& terms = array(rows[i], ptr, "terms");
      for (std::size_t k = 0; k < terms.size(); ++k) {
        const auto tp = child(child(ptr, "terms"), k);
        row.terms.push_back({var_ref(require(terms[k], tp, "var"), child(tp, "var")), number(terms[k], tp, "coef")});
      }
      prob.rows.push_back(std::move(row));
    }
  }

  prob.epsilon = number(root, "", "epsilon");

  const auto& terms = array(root, "", "terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto ptr = child("/terms", i);
    const auto& t = terms[i];
    auto part = parse_partition(require(t, ptr, "partition"), child(ptr, "partition"));
    auto values = numbers(require(t, ptr, "reference"), child(ptr, "reference"));
    if (values.size() != part.size()) {
      throw ConfigError(child(ptr, "reference"),
                        fmt::format("{} values for a partition of {} points", values.size(), part.size()));
    }
    UncertainTerm term{text(t, ptr, "name", fmt::format("f{}", i)),
                       NeighborhoodSpec{SampledFunction(std::move(part), std::move(values)),
                                        number(t, ptr, "delta_max"), number(t, ptr, "dev_max"),
                                        number(t, ptr, "lip_ratio")},
                       {}};
    const auto& evals = array(t, ptr, "evals");
    for (std::size_t k = 0; k < evals.size(); ++k) {
      term.evals.push_back(var_ref(evals[k], child(child(ptr, "evals"), k)));
    }
    prob.terms.push_back(std::move(term));
  }
  return prob;
}

BessConfig parse_bess(const json& root) {
  BessConfig cfg;
  const auto& feeder = require(root, "", "feeder");
  cfg.feeder.v_source = number(feeder, "/feeder", "v_source", 1.0);
  const auto& lines = array(feeder, "/feeder", "lines");
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const auto ptr = child("/feeder/lines", k);
    bess::Line line;
    line.parent = static_cast<int>(number(lines[k], ptr, "parent"));
    line.child = static_cast<int>(number(lines[k], ptr, "child"));
    line.r = number(lines[k], ptr, "r");
    line.x = number(lines[k], ptr, "x");
    cfg.feeder.lines.push_back(line);
  }

  const auto& sched = require(root, "", "schedule");
  auto& in = cfg.inputs;
  in.slots = count(sched, "/schedule", "slots", 24);
  in.dt = number(sched, "/schedule", "dt", 1.0);
  in.pv = matrix(require(sched, "/schedule", "pv"), "/schedule/pv");
  in.load_p = matrix(require(sched, "/schedule", "load_p"), "/schedule/load_p");
  in.load_q = matrix(require(sched, "/schedule", "load_q"), "/schedule/load_q");
  in.v_min = number(sched, "/schedule", "v_min", 0.95);
  in.v_max = number(sched, "/schedule", "v_max", 1.05);
  in.w_v = number(sched, "/schedule", "w_v", 10.0);
  in.epsilon = number(root, "", "epsilon", number(sched, "/schedule", "epsilon", 0.1));
  in.data_label = text(sched, "/schedule", "data_label");
  if (!(in.epsilon > 0.0)) throw ConfigError("/epsilon", "epsilon must be positive");

  const auto& bats = array(root, "", "batteries");
  for (std::size_t k = 0; k < bats.size(); ++k) {
    const auto ptr = child("/batteries", k);
    bess::Battery b;
    b.node = static_cast<int>(number(bats[k], ptr, "node"));
    b.p_min = number(bats[k], ptr, "p_min", b.p_min);
    b.p_max = number(bats[k], ptr, "p_max", b.p_max);
    b.e_max = number(bats[k], ptr, "e_max", b.e_max);
    b.e0 = number(bats[k], ptr, "e0", b.e0);
    b.delta_max = number(bats[k], ptr, "delta_max", b.delta_max);
    b.dev_max = number(bats[k], ptr, "dev_max", b.dev_max);
    b.lip_ratio = number(bats[k], ptr, "lip_ratio", b.lip_ratio);
    in.batteries.push_back(b);
  }

  cfg.scheme = text(root, "", "scheme", "benchmark");
  bool known = false;
  for (const char* name : kSchemeNames) known = known || cfg.scheme == name;
  if (!known) throw ConfigError("/scheme", fmt::format("unknown scheme '{}'", cfg.scheme));

  if (root.contains("parametric")) {
    const auto& par = root["parametric"];
    const auto a = numbers(require(par, "/parametric", "a"), "/parametric/a");
    const auto b = numbers(require(par, "/parametric", "b"), "/parametric/b");
    if (a.size() != 2) throw ConfigError("/parametric/a", "expected [lo, hi]");
    if (b.size() != 2) throw ConfigError("/parametric/b", "expected [lo, hi]");
    cfg.a_lo = a[0];
    cfg.a_hi = a[1];
    cfg.b_lo = b[0];
    cfg.b_hi = b[1];
  }
  return cfg;
}

}  // namespace

Config parse_config(const std::string& source) {
  json root;
  try {
    root = json::parse(source);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", fmt::format("invalid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw ConfigError("/", "expected an object");

  Config cfg;
  const auto kind = text(root, "", "kind", root.contains("feeder") ? "bess" : "problem");
  if (kind == "bess") {
    cfg.bess = parse_bess(root);
  } else if (kind == "problem") {
    cfg.problem = parse_problem(root);
  } else {
    throw ConfigError("/kind", fmt::format("unknown kind '{}'", kind));
  }
  if (root.contains("engine")) {
    const auto& eng = root["engine"];
    cfg.engine.tol = number(eng, "/engine", "tol", cfg.engine.tol);
    cfg.engine.max_iter = count(eng, "/engine", "max_iter", cfg.engine.max_iter);
  }
  if (root.contains("verify")) cfg.verify_levels = count(root["verify"], "/verify", "levels", cfg.verify_levels);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SegmentationScheme named_scheme(const std::string& name, double lo, double hi) {
  if (name == "sparse") return EvenScheme{0.004};
  if (name == "benchmark" || name == "parametric") return EvenScheme{0.002};
  if (name == "dense") return EvenScheme{0.0008};
  if (name == "hetero") {
    const double mid = lo + 0.5 * (hi - lo);
    return HeterogeneousScheme{{{lo, mid, 0.0008}, {mid, hi, 0.002}}};
  }
  throw InvalidInput(fmt::format("unknown scheme '{}'", name));
}

bess::BessProblem assemble_from_config(const BessConfig& cfg, const std::string& scheme) {
  auto in = cfg.inputs;
  for (auto& b : in.batteries) b.scheme = named_scheme(scheme.empty() ? cfg.scheme : scheme, b.p_min, b.p_max);
  return bess::assemble_bess_problem(bess::build_feeder(cfg.feeder), in);
}

ObroProblem problem_from_config(const Config& config, const std::string& scheme) {
  if (config.problem) return *config.problem;
  return assemble_from_config(*config.bess, scheme).problem;
}

}  // namespace obro
