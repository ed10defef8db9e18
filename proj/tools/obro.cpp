#include <iostream>

#include <CLI11.hpp>

#include "obro/cli.hpp"

int main(int argc, char** argv) {
  obro::cli::configure_logging();

  CLI::App app{"Robust optimization under objective functional uncertainty"};
  app.require_subcommand(1);

  obro::cli::SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run function generation on a config");
  solve_cmd->add_option("config", solve.config, "Problem or BESS config (JSON)")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--tol", solve.tol, "Stop when UB - LB <= tol");
  solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration cap");
  solve_cmd->add_option("--out", solve.out, "Output directory");
  solve_cmd->add_flag("--timing", solve.timing, "Add a wall_ms column to iterations.csv");

  obro::cli::BessArgs bess;
  auto* bess_cmd = app.add_subcommand("bess", "Solve the battery scheduling case under a segmentation scheme");
  bess_cmd->add_option("config", bess.config, "BESS config (JSON)")->required()->check(CLI::ExistingFile);
  bess_cmd->add_option("--scheme", bess.scheme, "sparse, benchmark, dense, hetero or parametric")
      ->check(CLI::IsMember({"sparse", "benchmark", "dense", "hetero", "parametric"}));
  bess_cmd->add_option("--out", bess.out, "Output directory");
  bess_cmd->add_flag("--timing", bess.timing, "Add a wall_ms column to iterations.csv");

  obro::cli::VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-check a solve against the brute-force oracles");
  verify_cmd->add_option("config", verify.config, "Problem config (JSON)")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--levels", verify.levels, "Grid levels per sample value");

  CLI11_PARSE(app, argc, argv);

  if (*solve_cmd) return obro::cli::cmd_solve(solve, std::cout, std::cerr);
  if (*bess_cmd) return obro::cli::cmd_bess(bess, std::cout, std::cerr);
  return obro::cli::cmd_verify(verify, std::cout, std::cerr);
}
