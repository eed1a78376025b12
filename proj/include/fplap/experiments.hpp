#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "fplap/eigensolvers.hpp"

namespace fplap {

// Exit-code contract shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNoConvergence = 3;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class WeightKind { constant, step, singular, csv };

struct WeightSpec {
  WeightKind kind = WeightKind::constant;
  double value = 1.0;  // constant
  int axis = 0;        // step
  double threshold = 0.5;
  double below = 1.0;
  double above = -0.5;
  double c = 1.0;  // singular: c |x-x0|^-alpha + offset
  std::array<double, 2> x0{0.3, 0.3};
  double alpha = 0.2;
  double offset = 0.0;
  std::string csv_path;  // csv

  WeightField build(const Domain& domain, double p, double s) const;
  std::string describe() const;
};

struct ExperimentConfig {
  DomainSpec domain;
  double s = 0.4;
  double p = 2.0;
  WeightSpec weight;
  SolverConfig solver;
  std::string out_dir;
  int oracle_count = 5;
  bool with_oracle = false;
  bool dump_kernel = false;
  bool verbose = false;
};

/// Parses a TOML-like key/value file (one `key = value` per line, "#"
/// comments). Unknown keys or malformed values raise ConfigError with the
/// offending key in the message.
ExperimentConfig parse_config_file(const std::string& path);

/// Validates every module-level precondition reachable from the config before
/// any computation starts. Throws ConfigError with a field-path diagnostic.
void validate_config(const ExperimentConfig& config);

struct VerifyOptions {
  bool corrupt_kernel = false;  // test hook: inject an asymmetric entry
};

/// Subcommand bodies. Each returns a process exit code from the contract
/// above and writes its artifacts under config.out_dir.
int cmd_solve(const ExperimentConfig& config, std::ostream& log);
int cmd_oracle(const ExperimentConfig& config, std::ostream& log);
int cmd_monotonicity(const ExperimentConfig& config_m,
                     const ExperimentConfig& config_mtilde, std::ostream& log);
int cmd_verify(const ExperimentConfig& config, const VerifyOptions& options,
               std::ostream& log);

/// Output root fallback: $FPLAP_OUT_ROOT or "runs".
std::string default_output_root();

}  // namespace fplap
