#include <CLI11.hpp>
#include <iostream>

#include "fplap/experiments.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  long long seed = -1;
  bool with_oracle = false;
  bool verbose = false;
  bool dump_kernel = false;
};

fplap::ExperimentConfig load(const CommonArgs& args) {
  fplap::ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = fplap::parse_config_file(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (args.seed >= 0) cfg.solver.seed = static_cast<std::uint64_t>(args.seed);
  cfg.with_oracle = cfg.with_oracle || args.with_oracle;
  cfg.verbose = cfg.verbose || args.verbose;
  cfg.dump_kernel = cfg.dump_kernel || args.dump_kernel;
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required) {
  auto* opt = cmd->add_option("--config", args.config_path,
                              "key = value config file");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir,
                  "output directory (default: $FPLAP_OUT_ROOT/<command>)");
  cmd->add_option("--seed", args.seed, "override solver seed");
  cmd->add_flag("--verbose", args.verbose, "log solver progress as CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted fractional p-Laplacian eigenvalue toolkit"};
  app.require_subcommand(1);

  CommonArgs solve_args, oracle_args, mono_args, verify_args;
  std::string mono_tilde_path;
  bool corrupt_kernel = false;

  auto* solve = app.add_subcommand(
      "solve", "compute the first two eigenvalues for one configuration");
  add_common(solve, solve_args, true);
  solve->add_flag("--oracle", solve_args.with_oracle,
                  "cross-check against the p=2 matrix oracle");
  solve->add_flag("--dump-kernel", solve_args.dump_kernel,
                  "write the assembled kernel as CSV");

  auto* oracle = app.add_subcommand(
      "oracle", "exact p=2 spectrum via the generalized symmetric eigensolver");
  add_common(oracle, oracle_args, true);

  auto* mono = app.add_subcommand(
      "monotonicity", "compare spectra for an ordered pair of weights");
  add_common(mono, mono_args, true);
  mono->add_option("--config-tilde", mono_tilde_path,
                   "config of the larger weight (same grid, s, p)")
      ->required();

  auto* verify = app.add_subcommand(
      "verify", "run the inequality sweeps and solver invariants");
  add_common(verify, verify_args, false);
  verify->add_flag("--corrupt-kernel", corrupt_kernel,
                   "inject an asymmetric kernel entry (fault-injection hook)")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return fplap::cmd_solve(load(solve_args), std::cout);
    if (oracle->parsed()) return fplap::cmd_oracle(load(oracle_args), std::cout);
    if (mono->parsed()) {
      fplap::ExperimentConfig cfg_m = load(mono_args);
      CommonArgs tilde_args = mono_args;
      tilde_args.config_path = mono_tilde_path;
      fplap::ExperimentConfig cfg_t = load(tilde_args);
      return fplap::cmd_monotonicity(cfg_m, cfg_t, std::cout);
    }
    if (verify->parsed()) {
      fplap::VerifyOptions options;
      options.corrupt_kernel = corrupt_kernel;
      return fplap::cmd_verify(load(verify_args), options, std::cout);
    }
  } catch (const fplap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fplap::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fplap::kExitNoConvergence;
  }
  return fplap::kExitConfig;
}
