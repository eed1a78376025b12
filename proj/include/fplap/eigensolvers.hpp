#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fplap/energy.hpp"

namespace fplap {

struct SolverConfig {
  double tol_residual = 1e-8;
  int max_iter = 50000;
  double step_init = 1.0;
  double armijo_factor = 0.5;
  std::uint64_t seed = 0;
  int path_points = 64;  // K, half-loop resolution; K >= 8
  // log-sum-exp temperature schedule, coarse to fine ([10,100,1000] x K)
  std::vector<double> lse_temperatures{640.0, 6400.0, 64000.0};
  int omega_samples = 1024;
  // called per iteration with (iteration, energy, residual) when set
  std::function<void(int, double, double)> progress_logger;
};

/// Eigenvalue estimate with its normalized eigenfunction (Ψ_m(u) = 1) and
/// relative residual of the weak formulation.
struct EigenPair {
  double lambda = 0.0;
  GridFunction u;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Discretized odd map from the circle into the weighted sphere: points[k]
/// holds f(ω_k) for θ_k = πk/K; the other half of the loop is -points[k].
struct SymmetricPath {
  std::vector<GridFunction> points;
  std::vector<double> energies;
  double total_length = 0.0;      // chord length of the closed odd loop
  double max_adjacent_gap = 0.0;  // largest chord between loop neighbors
};

struct PathMinimaxResult {
  double estimate = 0.0;  // max_k Φ(f(ω_k)) on the final path
  SymmetricPath path;
  GridFunction max_point;
  double residual = 1.0;  // residual of (estimate, max_point) as an eigenpair
  int iterations = 0;
  bool converged = false;
};

struct SimplicityReport {
  std::vector<double> lambdas;
  double lambda_spread = 0.0;
  double max_eigenfunction_distance = 0.0;  // max norm, after sign alignment
  bool all_converged = false;
};

struct OracleSpectrum {
  std::vector<EigenPair> pairs;
  bool truncated = false;  // fewer positive eigenvalues than requested
};

/// u / Ψ_m(u)^{1/p}. Throws std::domain_error when Ψ_m(u) <= 0 (the function
/// is not normalizable against this weight — legitimate for indefinite m).
GridFunction normalize_to_sphere(const GridFunction& u, const WeightField& weight,
                                 double p);

/// Flips the sign so the component of largest magnitude is positive; among
/// equal magnitudes the lowest index wins.
void apply_sign_convention(GridFunction& u);

/// First eigenvalue by projected descent on the weighted sphere, started from
/// the positive part of a seeded random vector on the positive support of m.
EigenPair solve_lambda1(const FractionalKernel& kernel, const WeightField& weight,
                        double p, const SolverConfig& config);

/// Multi-start agreement check for the simplicity of the first eigenvalue.
SimplicityReport check_simplicity(const FractionalKernel& kernel,
                                  const WeightField& weight, double p,
                                  const SolverConfig& config, int trials);

/// Second eigenvalue by the odd-path minimax: a string of sphere points from
/// e1 to -e1 descends a log-sum-exp relaxation of the path maximum over a
/// temperature schedule with per-iteration reparametrization; the path's
/// maximal point is then polished by a Newton solve of the stationarity
/// system and reinserted. The estimate is the maximum energy over the final
/// stored path, an upper bound for the discrete second eigenvalue.
PathMinimaxResult solve_lambda2_path(const FractionalKernel& kernel,
                                     const WeightField& weight, double p,
                                     const GridFunction& e1,
                                     const SolverConfig& config);

/// Upper bound from a nodal function: max over sampled ω of Φ(f(ω)) with
/// f(ω) = (ω₁ u⁺ - ω₂ u⁻)/K(ω) normalized through the disjoint-support
/// identity. Requires both parts nonzero with positive weighted p-mass.
double lambda2_upper_from_nodal(const FractionalKernel& kernel,
                                const WeightField& weight, double p,
                                const GridFunction& u_nodal, int omega_samples);

/// Exact spectrum of the p=2 specialization A u = λ M u via symmetric
/// factorization of the SPD form matrix. Returns positive eigenvalues in
/// ascending order with eigenvectors normalized to Ψ_m = 1.
OracleSpectrum p2_oracle_spectrum(const FractionalKernel& kernel,
                                  const WeightField& weight, int count);

/// C(m, m̃, λ) = inf { Ψ_m̃(u) : Ψ_m(u) = 1, Φ(u) <= λ }, by multi-start
/// penalized projected descent. Requires m <= m̃ componentwise.
double compute_monotonicity_constant(const FractionalKernel& kernel,
                                     const WeightField& m, const WeightField& m_tilde,
                                     double p, double lambda_cap,
                                     const SolverConfig& config);

}  // namespace fplap
