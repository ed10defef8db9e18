#pragma once

// Command implementations behind the `obro` executable.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace obro::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kMaxIterations = 2, kBudget = 3 };

struct SolveArgs {
  std::filesystem::path config;
  std::optional<double> tol;
  std::optional<std::size_t> max_iter;
  std::filesystem::path out = ".";
  bool timing = false;
};

struct BessArgs {
  std::filesystem::path config;
  std::string scheme;
  std::filesystem::path out = ".";
  bool timing = false;
};

struct VerifyArgs {
  std::filesystem::path config;
  std::optional<std::size_t> levels;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err);
int cmd_bess(const BessArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

/// Applies OBRO_LOG (quiet, info, trace); anything else keeps warnings only.
void configure_logging();

}  // namespace obro::cli
