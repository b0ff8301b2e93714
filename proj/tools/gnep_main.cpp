// Command-line front end: generate / solve / diagnose / bound / verify.
// Exit codes: 0 success, 1 malformed input, 2 iteration cap, 3 missing
// precondition.

#include <CLI11.hpp>
#include <iostream>

#include "gnep/commands.hpp"
#include "gnep/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"gnepkit: solver and diagnostics for jointly convex generalized Nash games"};
  app.set_version_flag("--version", std::string(gnep::kVersion));
  app.require_subcommand(1);

  gnep::GenerateCmdOptions gen;
  auto* cmd_gen = app.add_subcommand("generate", "emit a random quadratic instance file");
  cmd_gen->add_option("--players", gen.gen.players, "number of players")->default_val(2);
  cmd_gen->add_option("--dim", gen.gen.dim_per_player, "strategy dimension per player")
      ->default_val(1);
  cmd_gen->add_option("--seed", gen.gen.seed, "RNG seed; same seed, same bytes")->default_val(0);
  cmd_gen->add_option("--delta-floor", gen.gen.delta_floor,
                      "lower bound for the smallest eigenvalue of C + C^T")
      ->default_val(0.5);
  cmd_gen->add_option("--out", gen.out, "output instance path")->default_val("instance.json");

  gnep::SolveCmdOptions solve;
  auto* cmd_solve = app.add_subcommand("solve", "run ppa or extragradient on instances");
  cmd_solve->add_option("--instance", solve.instances, "instance file(s)")->required();
  cmd_solve->add_option("--method", solve.method, "ppa | extragradient")->default_val("ppa");
  cmd_solve->add_option("--a", solve.a, "regularization weight (default: file, then delta/2)");
  cmd_solve->add_option("--r", solve.r, "proximal parameter r");
  cmd_solve->add_option("--epsilon", solve.epsilon, "declared bound with 1/r < epsilon");
  cmd_solve->add_option("--tol", solve.tol, "termination tolerance");
  cmd_solve->add_option("--max-iters", solve.max_iterations, "iteration cap");
  cmd_solve->add_option("--x0", solve.x0, "start point, comma separated")->delimiter(',');
  cmd_solve->add_option("--out", solve.out_dir, "output directory")->default_val(".");
  cmd_solve->add_option("--jobs", solve.jobs, "parallel instances in batch mode")->default_val(1);

  gnep::DiagnoseCmdOptions diag;
  auto* cmd_diag = app.add_subcommand("diagnose", "weak-sharpness / conditioning report");
  cmd_diag->add_option("--instance", diag.instances, "instance file(s)")->required();
  cmd_diag->add_option("--a", diag.a, "regularization weight");
  cmd_diag->add_option("--grid", diag.grid_n, "base grid points per dimension")->default_val(41);
  cmd_diag->add_option("--out", diag.out_dir, "output directory")->default_val(".");
  cmd_diag->add_option("--jobs", diag.jobs, "parallel instances in batch mode")->default_val(1);

  gnep::BoundCmdOptions bound;
  auto* cmd_bound = app.add_subcommand("bound", "finite-termination step bound");
  cmd_bound->add_option("--instance", bound.instance, "instance file")->required();
  cmd_bound->add_option("--a", bound.a, "regularization weight");
  cmd_bound->add_option("--r", bound.r, "proximal parameter r");
  cmd_bound->add_option("--epsilon", bound.epsilon, "declared bound with 1/r < epsilon");
  cmd_bound->add_option("--x0", bound.x0, "start point, comma separated")->delimiter(',');
  cmd_bound->add_option("--trace", bound.trace_csv, "trace CSV for a measured k0 cross-check");
  cmd_bound->add_option("--out", bound.out_dir, "output directory")->default_val(".");

  gnep::VerifyCmdOptions verify;
  auto* cmd_verify = app.add_subcommand("verify", "re-certify an instance (and optional facts)");
  cmd_verify->add_option("--instance", verify.instance, "instance file")->required();
  cmd_verify->add_option("--facts", verify.facts, "facts sidecar to re-validate");

  CLI11_PARSE(app, argc, argv);

  if (cmd_gen->parsed()) return gnep::cmd_generate(gen, std::cout);
  if (cmd_solve->parsed()) return gnep::cmd_solve(solve, std::cout);
  if (cmd_diag->parsed()) return gnep::cmd_diagnose(diag, std::cout);
  if (cmd_bound->parsed()) return gnep::cmd_bound(bound, std::cout);
  if (cmd_verify->parsed()) return gnep::cmd_verify(verify, std::cout);
  return gnep::kExitInput;
}
