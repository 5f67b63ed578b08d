// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include "nlbvp/app.hpp"

int main(int argc, char **argv)
{
  CLI::App cli{"Elliptic boundary value problems with eigenvalue-dependent boundary conditions"};
  nlbvp::app::Options opt;
  std::string config, action;
  std::uint64_t seed = 0;
  double tol = 0.0;
  cli.add_option("--config", config, "JSON problem configuration");
  cli.add_option("--action", action, "solve | eigen | realize | verify | demo")
      ->check(CLI::IsMember({"solve", "eigen", "realize", "verify", "demo"}));
  cli.add_option("--out", opt.out, "output directory")->capture_default_str();
  cli.add_option("--jobs", opt.jobs, "worker threads")->capture_default_str();
  auto *seed_opt = cli.add_option("--seed", seed, "seed for randomized inputs (overrides the config)");
  auto *tol_opt = cli.add_option("--tol", tol, "eigen correspondence tolerance");
  try
  {
    cli.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : nlbvp::app::kConfig;
  }
  if (!config.empty())
    opt.config = config;
  if (!action.empty())
    opt.action = action;
  if (*seed_opt)
    opt.seed = seed;
  if (*tol_opt)
    opt.tol = tol;
  return nlbvp::app::run(opt);
}
