#include "fplap/experiments.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "fplap/inequalities.hpp"

namespace fplap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer for '" + key + "': " + value);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace

WeightField WeightSpec::build(const Domain& domain, double p, double s) const {
  switch (kind) {
    case WeightKind::constant:
      return WeightField::constant(domain, value);
    case WeightKind::step:
      return WeightField::step(domain, axis, threshold, below, above);
    case WeightKind::singular:
      return WeightField::singular(domain, c, x0, alpha, offset, p, s);
    case WeightKind::csv:
      return WeightField::from_csv(domain, csv_path);
  }
  throw ConfigError("weight.kind: unknown kind");
}

std::string WeightSpec::describe() const {
  std::ostringstream o;
  switch (kind) {
    case WeightKind::constant:
      o << "constant(" << fmt17(value) << ")";
      break;
    case WeightKind::step:
      o << "step(axis=" << axis << ",threshold=" << fmt17(threshold) << ","
        << fmt17(below) << "/" << fmt17(above) << ")";
      break;
    case WeightKind::singular:
      o << "singular(c=" << fmt17(c) << ",x0=" << fmt17(x0[0]) << ","
        << fmt17(x0[1]) << ",alpha=" << fmt17(alpha) << ",offset=" << fmt17(offset)
        << ")";
      break;
    case WeightKind::csv:
      o << "csv(" << csv_path << ")";
      break;
  }
  return o.str();
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  ExperimentConfig cfg;
  bool saw_ny = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));

    if (key == "domain.shape") {
      try {
        cfg.domain.shape = shape_from_string(value);
      } catch (const std::exception& e) {
        throw ConfigError(std::string("domain.shape: ") + e.what());
      }
      cfg.domain.dim = cfg.domain.shape == Shape::interval ? 1 : 2;
    } else if (key == "domain.lo_x") {
      cfg.domain.box_lo[0] = to_double(key, value);
    } else if (key == "domain.lo_y") {
      cfg.domain.box_lo[1] = to_double(key, value);
    } else if (key == "domain.hi_x") {
      cfg.domain.box_hi[0] = to_double(key, value);
    } else if (key == "domain.hi_y") {
      cfg.domain.box_hi[1] = to_double(key, value);
    } else if (key == "domain.nx") {
      cfg.domain.cells_per_axis[0] = to_int(key, value);
    } else if (key == "domain.ny") {
      cfg.domain.cells_per_axis[1] = to_int(key, value);
      saw_ny = true;
    } else if (key == "s") {
      cfg.s = to_double(key, value);
    } else if (key == "p") {
      cfg.p = to_double(key, value);
    } else if (key == "weight.kind") {
      if (value == "constant")
        cfg.weight.kind = WeightKind::constant;
      else if (value == "step")
        cfg.weight.kind = WeightKind::step;
      else if (value == "singular")
        cfg.weight.kind = WeightKind::singular;
      else if (value == "csv")
        cfg.weight.kind = WeightKind::csv;
      else
        throw ConfigError("weight.kind: unknown kind '" + value + "'");
    } else if (key == "weight.value") {
      cfg.weight.value = to_double(key, value);
    } else if (key == "weight.axis") {
      cfg.weight.axis = to_int(key, value);
    } else if (key == "weight.threshold") {
      cfg.weight.threshold = to_double(key, value);
    } else if (key == "weight.below") {
      cfg.weight.below = to_double(key, value);
    } else if (key == "weight.above") {
      cfg.weight.above = to_double(key, value);
    } else if (key == "weight.c") {
      cfg.weight.c = to_double(key, value);
    } else if (key == "weight.x0_x") {
      cfg.weight.x0[0] = to_double(key, value);
    } else if (key == "weight.x0_y") {
      cfg.weight.x0[1] = to_double(key, value);
    } else if (key == "weight.alpha") {
      cfg.weight.alpha = to_double(key, value);
    } else if (key == "weight.offset") {
      cfg.weight.offset = to_double(key, value);
    } else if (key == "weight.csv") {
      cfg.weight.csv_path = value;
    } else if (key == "solver.tol_residual") {
      cfg.solver.tol_residual = to_double(key, value);
    } else if (key == "solver.max_iter") {
      cfg.solver.max_iter = to_int(key, value);
    } else if (key == "solver.step_init") {
      cfg.solver.step_init = to_double(key, value);
    } else if (key == "solver.armijo_factor") {
      cfg.solver.armijo_factor = to_double(key, value);
    } else if (key == "solver.seed") {
      cfg.solver.seed = static_cast<std::uint64_t>(to_int(key, value));
    } else if (key == "solver.path_points") {
      cfg.solver.path_points = to_int(key, value);
    } else if (key == "solver.omega_samples") {
      cfg.solver.omega_samples = to_int(key, value);
    } else if (key == "solver.lse_temperatures") {
      cfg.solver.lse_temperatures.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ','))
        cfg.solver.lse_temperatures.push_back(to_double(key, trim(item)));
    } else if (key == "oracle.count") {
      cfg.oracle_count = to_int(key, value);
    } else if (key == "out") {
      cfg.out_dir = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (cfg.domain.dim == 2 && !saw_ny)
    cfg.domain.cells_per_axis[1] = cfg.domain.cells_per_axis[0];
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.s > 0.0 && cfg.s < 1.0)) throw ConfigError("s: must be in (0,1)");
  if (!(cfg.p > 1.0)) throw ConfigError("p: must be > 1");
  const double bound = cfg.domain.dim == 1 ? 1.0 : cfg.domain.dim;
  if (!(cfg.p * cfg.s < bound))
    throw ConfigError("p,s: p*s must be < N (< 1 in dimension 1)");
  Domain domain = [&] {
    try {
      return build_grid(cfg.domain);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("domain: ") + e.what());
    }
  }();
  try {
    (void)cfg.weight.build(domain, cfg.p, cfg.s);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("weight: ") + e.what());
  }
  if (!(cfg.solver.tol_residual > 0.0))
    throw ConfigError("solver.tol_residual: must be positive");
  if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter: must be >= 1");
  if (cfg.solver.path_points < 8)
    throw ConfigError("solver.path_points: must be >= 8");
  if (cfg.solver.omega_samples < 4)
    throw ConfigError("solver.omega_samples: must be >= 4");
  for (double t : cfg.solver.lse_temperatures)
    if (!(t > 0.0)) throw ConfigError("solver.lse_temperatures: must be positive");
  if (cfg.oracle_count < 1) throw ConfigError("oracle.count: must be >= 1");
}

std::string default_output_root() {
  if (const char* env = std::getenv("FPLAP_OUT_ROOT")) return env;
  return "runs";
}

namespace {

json manifest_json(const ExperimentConfig& cfg) {
  json m;
  m["domain"]["shape"] = to_string(cfg.domain.shape);
  m["domain"]["lo"] = {cfg.domain.box_lo[0], cfg.domain.box_lo[1]};
  m["domain"]["hi"] = {cfg.domain.box_hi[0], cfg.domain.box_hi[1]};
  m["domain"]["cells_per_axis"] = {cfg.domain.cells_per_axis[0],
                                   cfg.domain.cells_per_axis[1]};
  m["domain"]["dim"] = cfg.domain.dim;
  m["s"] = cfg.s;
  m["p"] = cfg.p;
  m["weight"] = cfg.weight.describe();
  m["solver"]["tol_residual"] = cfg.solver.tol_residual;
  m["solver"]["max_iter"] = cfg.solver.max_iter;
  m["solver"]["step_init"] = cfg.solver.step_init;
  m["solver"]["armijo_factor"] = cfg.solver.armijo_factor;
  m["solver"]["seed"] = cfg.solver.seed;
  m["solver"]["path_points"] = cfg.solver.path_points;
  m["solver"]["omega_samples"] = cfg.solver.omega_samples;
  m["solver"]["lse_temperatures"] = cfg.solver.lse_temperatures;
  m["oracle_requested"] = cfg.with_oracle;
  m["version"] = "0.1.0";
  return m;
}

json eigenpair_json(const EigenPair& pair) {
  return json{{"lambda", pair.lambda},
              {"residual", pair.residual},
              {"iterations", pair.iterations},
              {"converged", pair.converged}};
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_eigenfunction_csv(const fs::path& path, const Domain& domain,
                             const GridFunction& u) {
  std::ostringstream o;
  o << (domain.dim() == 1 ? "x,value\n" : "x,y,value\n");
  for (int i = 0; i < domain.num_cells(); ++i) {
    const auto& c = domain.center(i);
    o << fmt17(c[0]) << ",";
    if (domain.dim() == 2) o << fmt17(c[1]) << ",";
    o << fmt17(u(i)) << "\n";
  }
  write_text(path, o.str());
}

struct Problem {
  Domain domain;
  FractionalKernel kernel;
  WeightField weight;
};

Problem setup(const ExperimentConfig& cfg) {
  validate_config(cfg);
  Problem pr{build_grid(cfg.domain), {}, {}};
  pr.kernel = assemble_kernel(pr.domain, cfg.s, cfg.p);
  pr.weight = cfg.weight.build(pr.domain, cfg.p, cfg.s);
  return pr;
}

fs::path prepare_out_dir(const ExperimentConfig& cfg, const std::string& fallback) {
  fs::path dir = cfg.out_dir.empty()
                     ? fs::path(default_output_root()) / fallback
                     : fs::path(cfg.out_dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

int cmd_solve(const ExperimentConfig& cfg, std::ostream& log) {
  Problem pr = setup(cfg);
  const fs::path dir = prepare_out_dir(cfg, "solve");

  SolverConfig solver = cfg.solver;
  std::ostringstream progress;
  if (cfg.verbose) {
    progress << "iteration,energy,residual\n";
    solver.progress_logger = [&progress](int it, double phi, double res) {
      progress << it << "," << fmt17(phi) << "," << fmt17(res) << "\n";
    };
  }
  const EigenPair first = solve_lambda1(pr.kernel, pr.weight, cfg.p, solver);
  solver.progress_logger = nullptr;
  const PathMinimaxResult second =
      solve_lambda2_path(pr.kernel, pr.weight, cfg.p, first.u, solver);

  json out;
  out["manifest"] = manifest_json(cfg);
  out["eigenpairs"] = json::array();
  out["eigenpairs"].push_back(eigenpair_json(first));
  out["eigenpairs"].push_back(json{{"lambda", second.estimate},
                                   {"residual", second.residual},
                                   {"iterations", second.iterations},
                                   {"converged", second.converged}});
  out["files"] = json{{"eigenfunction_1", "eigenfunction_1.csv"},
                      {"eigenfunction_2", "eigenfunction_2.csv"}};
  write_eigenfunction_csv(dir / "eigenfunction_1.csv", pr.domain, first.u);
  write_eigenfunction_csv(dir / "eigenfunction_2.csv", pr.domain, second.max_point);

  if (cfg.dump_kernel) {
    std::ostringstream k;
    dump_kernel_csv(pr.kernel, k);
    write_text(dir / "kernel.csv", k.str());
    out["files"]["kernel"] = "kernel.csv";
  }
  if (cfg.verbose) {
    write_text(dir / "lambda1_progress.csv", progress.str());
    out["files"]["lambda1_progress"] = "lambda1_progress.csv";
  }

  bool oracle_ok = true;
  if (cfg.with_oracle) {
    if (std::abs(cfg.p - 2.0) > 1e-12)
      throw ConfigError("p: --oracle requires p = 2");
    const OracleSpectrum spec = p2_oracle_spectrum(pr.kernel, pr.weight, 2);
    json cross;
    cross["truncated"] = spec.truncated;
    if (!spec.pairs.empty()) {
      cross["lambda1"] = spec.pairs[0].lambda;
      cross["lambda1_rel_diff"] =
          std::abs(first.lambda - spec.pairs[0].lambda) / spec.pairs[0].lambda;
    }
    if (spec.pairs.size() >= 2) {
      cross["lambda2"] = spec.pairs[1].lambda;
      cross["lambda2_rel_diff"] =
          std::abs(second.estimate - spec.pairs[1].lambda) / spec.pairs[1].lambda;
    }
    out["oracle"] = cross;
  }

  write_text(dir / "eigenpairs.json", out.dump(2) + "\n");
  log << "solve: lambda1=" << fmt17(first.lambda)
      << " lambda2=" << fmt17(second.estimate) << " -> " << dir.string() << "\n";
  (void)oracle_ok;
  return (first.converged && second.converged) ? kExitOk : kExitNoConvergence;
}

int cmd_oracle(const ExperimentConfig& cfg, std::ostream& log) {
  if (std::abs(cfg.p - 2.0) > 1e-12) throw ConfigError("p: oracle requires p = 2");
  Problem pr = setup(cfg);
  const fs::path dir = prepare_out_dir(cfg, "oracle");
  const OracleSpectrum spec = p2_oracle_spectrum(pr.kernel, pr.weight,
                                                 cfg.oracle_count);
  json out;
  out["manifest"] = manifest_json(cfg);
  out["manifest"]["oracle_count"] = cfg.oracle_count;
  out["manifest"]["truncated"] = spec.truncated;
  out["eigenpairs"] = json::array();
  out["files"] = json::object();
  for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
    out["eigenpairs"].push_back(eigenpair_json(spec.pairs[i]));
    const std::string name = "eigenfunction_" + std::to_string(i + 1);
    out["files"][name] = name + ".csv";
    write_eigenfunction_csv(dir / (name + ".csv"), pr.domain, spec.pairs[i].u);
  }
  write_text(dir / "eigenpairs.json", out.dump(2) + "\n");
  log << "oracle: " << spec.pairs.size() << " eigenvalues -> " << dir.string()
      << "\n";
  return kExitOk;
}

int cmd_monotonicity(const ExperimentConfig& cfg_m, const ExperimentConfig& cfg_mt,
                     std::ostream& log) {
  if (cfg_m.domain.shape != cfg_mt.domain.shape ||
      cfg_m.domain.cells_per_axis != cfg_mt.domain.cells_per_axis ||
      cfg_m.domain.box_lo != cfg_mt.domain.box_lo ||
      cfg_m.domain.box_hi != cfg_mt.domain.box_hi)
    throw ConfigError("domain: both weights must live on the same grid");
  if (cfg_m.s != cfg_mt.s || cfg_m.p != cfg_mt.p)
    throw ConfigError("s,p: both configs must share s and p");

  Problem pr = setup(cfg_m);
  const WeightField mt = [&] {
    validate_config(cfg_mt);
    return cfg_mt.weight.build(pr.domain, cfg_mt.p, cfg_mt.s);
  }();
  const WeightField& m = pr.weight;
  if (((mt.values - m.values).array() < 0.0).any())
    throw ConfigError("weight: requires m <= m_tilde componentwise");
  const bool strictly_less = ((mt.values - m.values).array() > 0.0).all();
  const bool somewhere_less = ((mt.values - m.values).array() > 0.0).any();

  const fs::path dir = prepare_out_dir(cfg_m, "monotonicity");
  const double p = cfg_m.p;
  SolverConfig solver = cfg_m.solver;

  const EigenPair l1m = solve_lambda1(pr.kernel, m, p, solver);
  const EigenPair l1t = solve_lambda1(pr.kernel, mt, p, solver);
  const PathMinimaxResult l2m = solve_lambda2_path(pr.kernel, m, p, l1m.u, solver);
  const PathMinimaxResult l2t = solve_lambda2_path(pr.kernel, mt, p, l1t.u, solver);
  const double cC =
      compute_monotonicity_constant(pr.kernel, m, mt, p, l2m.estimate + 1.0, solver);

  json rep;
  rep["manifest"] = manifest_json(cfg_m);
  rep["manifest"]["weight_tilde"] = cfg_mt.weight.describe();
  rep["lambda1_m"] = l1m.lambda;
  rep["lambda1_mtilde"] = l1t.lambda;
  rep["lambda2_m"] = l2m.estimate;
  rep["lambda2_mtilde"] = l2t.estimate;
  rep["monotonicity_constant"] = cC;

  const double tol_k1 = 1e-8 * std::max(1.0, l1m.lambda);
  const double tol_k2 = 1e-8 * std::max(1.0, l2m.estimate);
  json claims;
  claims["i_nonstrict"] = {
      {"applicable", true},
      {"holds", l1m.lambda >= l1t.lambda - tol_k1 &&
                    l2m.estimate >= l2t.estimate - tol_k2},
      {"margin_lambda1", l1m.lambda - l1t.lambda},
      {"margin_lambda2", l2m.estimate - l2t.estimate}};
  claims["ii_strict_lambda1"] = {
      {"applicable", somewhere_less},
      {"holds", somewhere_less &&
                    l1m.lambda - l1t.lambda > 1e-6 * l1m.lambda},
      {"margin", l1m.lambda - l1t.lambda}};
  claims["iii_strict_lambda2"] = {
      {"applicable", strictly_less},
      {"holds", strictly_less &&
                    l2m.estimate - l2t.estimate > 1e-6 * l2m.estimate},
      {"margin", l2m.estimate - l2t.estimate}};
  rep["claims"] = claims;

  if (std::abs(p - 2.0) < 1e-12) {
    const OracleSpectrum om = p2_oracle_spectrum(pr.kernel, m, 2);
    const OracleSpectrum ot = p2_oracle_spectrum(pr.kernel, mt, 2);
    json oracle;
    if (om.pairs.size() >= 2 && ot.pairs.size() >= 2) {
      oracle["lambda1_m"] = om.pairs[0].lambda;
      oracle["lambda1_mtilde"] = ot.pairs[0].lambda;
      oracle["lambda2_m"] = om.pairs[1].lambda;
      oracle["lambda2_mtilde"] = ot.pairs[1].lambda;
    }
    rep["oracle"] = oracle;
  }

  const bool all_conv =
      l1m.converged && l1t.converged && l2m.converged && l2t.converged;
  rep["converged"] = all_conv;
  write_text(dir / "monotonicity.json", rep.dump(2) + "\n");
  log << "monotonicity: lambda1 " << fmt17(l1m.lambda) << " -> "
      << fmt17(l1t.lambda) << ", lambda2 " << fmt17(l2m.estimate) << " -> "
      << fmt17(l2t.estimate) << ", C=" << fmt17(cC) << " -> " << dir.string()
      << "\n";
  return all_conv ? kExitOk : kExitNoConvergence;
}

namespace {

struct SuiteRow {
  std::string name;
  long samples = 0;
  double worst = 0.0;
  bool pass = false;
};

// shared 8-cell 1D test bed for the function-space sweeps
struct VerifyBed {
  Domain domain;
  std::map<double, FractionalKernel> kernels;  // by p
  const FractionalKernel& kernel(double p) {
    auto it = kernels.find(p);
    if (it == kernels.end())
      it = kernels.emplace(p, assemble_kernel(domain, 0.25, p)).first;
    return it->second;
  }
};

}  // namespace

int cmd_verify(const ExperimentConfig& cfg, const VerifyOptions& options,
               std::ostream& log) {
  validate_config(cfg);
  std::vector<SuiteRow> rows;
  std::mt19937_64 rng(cfg.solver.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  // configured kernel: symmetry/positivity, optionally corrupted via the hook
  {
    Problem pr = setup(cfg);
    if (options.corrupt_kernel && pr.kernel.num_cells() >= 2)
      pr.kernel.pair_weights(1, 0) += 1e-3 * (1.0 + pr.kernel.pair_weights(1, 0));
    double worst = 0.0;
    const int n = pr.kernel.num_cells();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        worst = std::max(worst, std::abs(pr.kernel.pair_weights(i, j) -
                                         pr.kernel.pair_weights(j, i)));
    bool positive = (pr.kernel.exterior_coeff.array() > 0.0).all();
    for (int i = 0; i < n && positive; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!(pr.kernel.pair_weights(i, j) > 0.0)) {
          positive = false;
          break;
        }
    rows.push_back({"kernel-symmetry", static_cast<long>(n) * n, -worst,
                    worst == 0.0 && positive});
  }

  const double gap_tol = -1e-10;
  VerifyBed bed{build_grid(DomainSpec::interval(0.0, 1.0, 8)), {}};

  {
    double worst = 0.0;
    const long samples = 100000;
    for (long i = 0; i < samples; ++i) {
      const double a = 10.0 * unit(rng), b = 10.0 * unit(rng);
      const double p = 1.0 + 4.0 * unit(rng) + 1e-9;
      worst = std::min(worst, convexity_gap(a, b, p).gap);
    }
    rows.push_back({"convexity", samples, worst, worst >= gap_tol});
  }
  {
    double worst = 0.0;
    const long samples = 100000;
    for (long i = 0; i < samples; ++i) {
      const double a = 10.0 * unit(rng) + 1e-6, b = 10.0 * unit(rng) + 1e-6;
      const double q = 4.0 * unit(rng) + 1e-6;
      worst = std::min(worst, lagrange_gap(a, b, q).gap);
    }
    rows.push_back({"lagrange", samples, worst, worst >= gap_tol});
  }
  {
    double worst = 0.0;
    const long samples = 10000;
    const std::array<double, 4> ps{1.5, 2.0, 3.0, 4.0};
    for (long i = 0; i < samples; ++i) {
      GridFunction u(8), v(8);
      Eigen::VectorXd w(8);
      for (int j = 0; j < 8; ++j) {
        u(j) = 3.0 * sym(rng);
        v(j) = 3.0 * sym(rng);
        w(j) = 2.0 * unit(rng);
      }
      const WeightField wp = WeightField::from_raw(w, 0.125);
      worst = std::min(worst, clarkson_gap(u, v, ps[i % 4], wp).gap);
    }
    rows.push_back({"clarkson", samples, worst, worst >= gap_tol});
  }
  {
    double worst = 0.0;
    const long samples = 10000;
    const std::array<double, 3> ps{1.5, 2.0, 3.0};
    const std::array<double, 3> ts{0.25, 0.5, 0.75};
    for (long i = 0; i < samples; ++i) {
      GridFunction u(8), v(8);
      for (int j = 0; j < 8; ++j) {
        u(j) = 0.05 + 3.0 * unit(rng);
        v(j) = 0.05 + 3.0 * unit(rng);
      }
      const double p = ps[i % 3];
      worst = std::min(
          worst, hidden_convexity_gap(bed.kernel(p), p, u, v, ts[(i / 3) % 3]).gap);
    }
    rows.push_back({"hidden-convexity", samples, worst, worst >= gap_tol});
  }
  {
    double worst = 0.0;
    const long samples = 100000;
    const std::array<double, 3> ps{1.5, 2.0, 3.0};
    for (long i = 0; i < samples; ++i) {
      const double ax = 3.0 * unit(rng), ay = 3.0 * unit(rng);
      const double bx = 3.0 * unit(rng), by = 3.0 * unit(rng);
      const double eps = 0.01 + unit(rng);
      worst = std::min(worst, picone_gap(ax, ay, bx, by, ps[i % 3], eps).gap);
    }
    rows.push_back({"picone", samples, worst, worst >= gap_tol});
  }
  {
    double worst = 0.0;
    const long samples = 100000;
    const std::array<double, 3> ps{1.5, 2.0, 3.0};
    for (long i = 0; i < samples; ++i) {
      const double ux = 3.0 * sym(rng), uy = 3.0 * sym(rng);
      const double theta = 2.0 * M_PI * unit(rng);
      const double U = std::max(ux, 0.0) - std::max(uy, 0.0);
      const double V = std::max(-ux, 0.0) - std::max(-uy, 0.0);
      worst = std::min(
          worst, scd5_gap(U, V, std::cos(theta), std::sin(theta), ps[i % 3]).gap);
    }
    rows.push_back({"scd5", samples, worst, worst >= gap_tol});
  }
  {
    double worst = 0.0;
    const long samples = 10000;
    const std::array<double, 3> ps{1.5, 2.0, 3.0};
    for (long i = 0; i < samples; ++i) {
      GridFunction u(8);
      for (int j = 0; j < 8; ++j) u(j) = 3.0 * sym(rng);
      const double p = ps[i % 3];
      worst = std::min(worst, absolute_value_contraction_gap(bed.kernel(p), p, u).gap);
    }
    rows.push_back({"abs-contraction", samples, worst, worst >= gap_tol});
  }

  // gradient finite-difference checks
  {
    double worst_rel = 0.0;
    const std::array<double, 3> ps{1.5, 2.0, 3.0};
    Eigen::VectorXd wvals(8);
    for (int j = 0; j < 8; ++j) wvals(j) = 2.0 * sym(rng);
    wvals(0) = std::abs(wvals(0)) + 0.1;  // keep positive mass
    const WeightField wf = WeightField::from_raw(wvals, 0.125);
    const double deltah = 1e-5;
    std::array<int, 8> perm{0, 1, 2, 3, 4, 5, 6, 7};
    for (double p : ps) {
      const FractionalKernel& ker = bed.kernel(p);
      for (int trial = 0; trial < 20; ++trial) {
        std::shuffle(perm.begin(), perm.end(), rng);
        GridFunction u(8);
        for (int j = 0; j < 8; ++j) {
          const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
          u(j) = sign * (0.15 + 0.37 * perm[j] + 0.05 * sym(rng));
        }
        const GridFunction g1 = gagliardo_gradient(ker, p, u);
        const GridFunction g2 = weighted_lp_gradient(wf, p, u);
        const double scale1 = g1.cwiseAbs().maxCoeff();
        const double scale2 = std::max(g2.cwiseAbs().maxCoeff(), 1e-12);
        for (int j = 0; j < 8; ++j) {
          GridFunction up = u, um = u;
          up(j) += deltah;
          um(j) -= deltah;
          const double fd1 = (gagliardo_energy(ker, p, up) -
                              gagliardo_energy(ker, p, um)) /
                             (2.0 * deltah);
          const double fd2 = (weighted_lp_energy(wf, p, up) -
                              weighted_lp_energy(wf, p, um)) /
                             (2.0 * deltah);
          worst_rel = std::max(worst_rel, std::abs(fd1 - g1(j)) / scale1);
          worst_rel = std::max(worst_rel, std::abs(fd2 - g2(j)) / scale2);
        }
      }
    }
    rows.push_back({"gradient-fd", 3 * 20 * 8 * 2, -worst_rel, worst_rel < 1e-6});
  }

  // p-homogeneity and Euler identities
  {
    double worst_rel = 0.0;
    const std::array<double, 3> ps{1.5, 2.0, 3.0};
    const std::array<double, 2> scales{-2.0, 0.5};
    Eigen::VectorXd wvals(8);
    for (int j = 0; j < 8; ++j) wvals(j) = sym(rng);
    wvals(3) = std::abs(wvals(3)) + 0.2;
    const WeightField wf = WeightField::from_raw(wvals, 0.125);
    for (double p : ps) {
      const FractionalKernel& ker = bed.kernel(p);
      for (int trial = 0; trial < 40; ++trial) {
        GridFunction u(8);
        for (int j = 0; j < 8; ++j) u(j) = 3.0 * sym(rng);
        const double phi = gagliardo_energy(ker, p, u);
        const double psi = weighted_lp_energy(wf, p, u);
        for (double t : scales) {
          const double want = std::pow(std::abs(t), p);
          worst_rel = std::max(
              worst_rel,
              std::abs(gagliardo_energy(ker, p, GridFunction(t * u)) - want * phi) /
                  std::max(1.0, std::abs(want * phi)));
          worst_rel = std::max(
              worst_rel, std::abs(weighted_lp_energy(wf, p, GridFunction(t * u)) -
                                  want * psi) /
                             std::max(1.0, std::abs(want * psi)));
        }
        worst_rel = std::max(
            worst_rel, std::abs(gagliardo_gradient(ker, p, u).dot(u) - p * phi) /
                           std::max(1.0, std::abs(p * phi)));
        worst_rel = std::max(
            worst_rel, std::abs(weighted_lp_gradient(wf, p, u).dot(u) - p * psi) /
                           std::max(1.0, std::abs(p * psi)));
      }
    }
    rows.push_back({"homogeneity", 3 * 40 * 6, -worst_rel, worst_rel < 1e-10});
  }

  // multi-start simplicity on a small case
  {
    const Domain dom = build_grid(DomainSpec::interval(0.0, 1.0, 16));
    const FractionalKernel ker = assemble_kernel(dom, 0.4, 2.0);
    const WeightField wf = WeightField::constant(dom, 1.0);
    SolverConfig sc = cfg.solver;
    const SimplicityReport rep = check_simplicity(ker, wf, 2.0, sc, 3);
    const bool pass = rep.lambda_spread < 1e-8 * rep.lambdas[0] &&
                      rep.max_eigenfunction_distance < 1e-4;
    rows.push_back({"simplicity", 3, -rep.max_eigenfunction_distance, pass});
  }

  bool all_pass = true;
  log << "suite                 samples      worst-gap  status\n";
  for (const auto& row : rows) {
    char line[128];
    std::snprintf(line, sizeof line, "%-20s %8ld %14.3e  %s\n", row.name.c_str(),
                  row.samples, row.worst, row.pass ? "pass" : "FAIL");
    log << line;
    all_pass = all_pass && row.pass;
  }
  if (!all_pass) {
    for (const auto& row : rows)
      if (!row.pass) log << "failing suite: " << row.name << "\n";
  }
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace fplap
