#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ringbind/cli.hpp"

namespace {

struct CommonBinding {
  double n0 = 0;
  CLI::Option* n0_opt = nullptr;
};

CommonBinding add_common(CLI::App* cmd, ringbind::cli::CommonOptions& common) {
  CommonBinding binding;
  cmd->add_option("-p,--params", common.params_path,
                  "parameter file (key = value lines, # comments)");
  cmd->add_option("-R,--ring", common.ring_len, "binding sites per ring")
      ->check(CLI::Range(3, 32))
      ->capture_default_str();
  binding.n0_opt = cmd->add_option("--n0", binding.n0,
                                   "bath molecules per 5 uM (overrides the parameter file)");
  cmd->add_option("--engine", common.engine_name,
                  "force the engine: enum (exhaustive) or dp (transfer)");
  cmd->add_option("--format", common.format_name, "output format: csv or json")
      ->capture_default_str();
  cmd->add_option("-o,--out", common.out_path, "write output to this file instead of stdout");
  return binding;
}

void finish_common(const CommonBinding& binding, ringbind::cli::CommonOptions& common) {
  if (binding.n0_opt->count() > 0) common.n0 = binding.n0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium nucleotide occupancy on a stacked pair of binding rings"};
  app.require_subcommand(1);

  ringbind::cli::DistOptions dist;
  CLI::App* dist_cmd = app.add_subcommand("dist", "occupancy distribution at one concentration");
  const CommonBinding dist_common = add_common(dist_cmd, dist.common);
  dist_cmd->add_option("--atp", dist.atp_uM, "ligand concentration in uM")->required();

  ringbind::cli::SweepOptions sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "distributions across a concentration grid");
  const CommonBinding sweep_common = add_common(sweep_cmd, sweep.common);
  sweep_cmd->add_option("--atp-min", sweep.atp_min_uM, "grid start in uM")->capture_default_str();
  sweep_cmd->add_option("--atp-max", sweep.atp_max_uM, "grid end in uM")->capture_default_str();
  sweep_cmd->add_option("--points", sweep.points, "log-spaced grid size")->capture_default_str();
  sweep_cmd->add_option("--atp", sweep.atp_list_uM,
                        "explicit ascending concentrations (replaces the grid; repeatable)");

  ringbind::cli::CrossoverOptions crossover;
  CLI::App* crossover_cmd =
      app.add_subcommand("crossover", "concentration where the modal occupancy switches");
  const CommonBinding crossover_common = add_common(crossover_cmd, crossover.common);
  crossover_cmd->add_option("--lo", crossover.lo_uM, "bracket start in uM")->capture_default_str();
  crossover_cmd->add_option("--hi", crossover.hi_uM, "bracket end in uM")->capture_default_str();
  crossover_cmd->add_option("--resolution", crossover.resolution_uM, "bracket width to stop at")
      ->capture_default_str();

  ringbind::cli::FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "estimate parameters from observations");
  const CommonBinding fit_common = add_common(fit_cmd, fit.common);
  fit_cmd->add_option("-d,--data", fit.data_path, "dataset CSV (atp_uM,kind,n,value,weight)")
      ->required();
  fit_cmd->add_option("--restarts", fit.restarts, "independent simplex starts")
      ->capture_default_str();
  fit_cmd->add_option("--iters", fit.max_iters, "simplex iterations per start")
      ->capture_default_str();
  fit_cmd->add_option("--polish", fit.polish_rounds, "extra runs at the incumbent")
      ->capture_default_str();
  fit_cmd->add_option("--seed", fit.seed, "restart draw seed")->capture_default_str();

  ringbind::cli::VerifyOptions verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "internal consistency checks");
  const CommonBinding verify_common = add_common(verify_cmd, verify.common);
  verify_cmd->add_option("--draws", verify.draws, "random parameter draws for the engine "
                                                  "cross-check")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "draw seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (dist_cmd->parsed()) {
    finish_common(dist_common, dist.common);
    return ringbind::cli::cmd_dist(dist, std::cout, std::cerr);
  }
  if (sweep_cmd->parsed()) {
    finish_common(sweep_common, sweep.common);
    return ringbind::cli::cmd_sweep(sweep, std::cout, std::cerr);
  }
  if (crossover_cmd->parsed()) {
    finish_common(crossover_common, crossover.common);
    return ringbind::cli::cmd_crossover(crossover, std::cout, std::cerr);
  }
  if (fit_cmd->parsed()) {
    finish_common(fit_common, fit.common);
    return ringbind::cli::cmd_fit(fit, std::cout, std::cerr);
  }
  finish_common(verify_common, verify.common);
  return ringbind::cli::cmd_verify(verify, std::cout, std::cerr);
}
