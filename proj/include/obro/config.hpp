#pragma once

// JSON configuration: generic problems and BESS cases.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "obro/bess.hpp"
#include "obro/error.hpp"
#include "obro/model.hpp"

namespace obro {

/// Malformed configuration; the message starts with a JSON pointer.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& pointer, const std::string& message)
      : InvalidInput(pointer + ": " + message), pointer_(pointer) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct EngineSettings {
  double tol = 1e-2;
  std::size_t max_iter = 500;
};

struct BessConfig {
  bess::FeederSpec feeder;
  bess::ScheduleInputs inputs;
  std::string scheme = "benchmark";
  double a_lo = 9.0;
  double a_hi = 10.0;
  double b_lo = 4.0;
  double b_hi = 5.0;
};

struct Config {
  std::optional<ObroProblem> problem;
  std::optional<BessConfig> bess;
  EngineSettings engine;
  std::size_t verify_levels = 101;

  bool is_bess() const { return bess.has_value(); }
};

Config parse_config(const std::string& text);
Config load_config(const std::filesystem::path& path);

/// Named partition schemes for a battery power range [lo, hi]: sparse,
/// benchmark, dense, and hetero (dense steps on the lower half, benchmark
/// steps above).
SegmentationScheme named_scheme(const std::string& name, double lo, double hi);

inline constexpr const char* kSchemeNames[] = {"sparse", "benchmark", "dense", "hetero", "parametric"};

/// Problem to solve for a config; BESS configs are assembled with `scheme`
/// (or the config's own scheme when empty).
ObroProblem problem_from_config(const Config& config, const std::string& scheme = {});

/// Assembled BESS case with the scheme applied to every battery.
bess::BessProblem assemble_from_config(const BessConfig& cfg, const std::string& scheme);

}  // namespace obro
