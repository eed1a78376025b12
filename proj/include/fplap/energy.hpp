#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "fplap/domain.hpp"
#include "fplap/kernel.hpp"

namespace fplap {

/// One value per interior cell, zero-extended outside the domain.
using GridFunction = Eigen::VectorXd;

namespace detail {

/// |x|^e with the convention 0^e = 0 (covers e < 0 coming from p < 2).
inline double pow_abs(double x, double e) {
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  if (e == 2.0) return ax * ax;
  if (e == 1.0) return ax;
  if (e == 0.5) return std::sqrt(ax);
  if (e == 3.0) return ax * ax * ax;
  return std::pow(ax, e);
}

/// |x|^{e-1} x, continuous with value 0 at x = 0 for the exponents the
/// solvers use (e = p-1 > 0).
inline double signed_pow(double x, double e) {
  if (x == 0.0) return 0.0;
  const double m = pow_abs(x, e);
  return x > 0.0 ? m : -m;
}

}  // namespace detail

/// Sign-indefinite weight, one value per interior cell.
struct WeightField {
  Eigen::VectorXd values;
  double cell_volume = 1.0;
  double positive_mass = 0.0;  // sum of positive values times cell volume

  static WeightField constant(const Domain& domain, double value);
  /// value_below where center[axis] < threshold, value_above elsewhere.
  static WeightField step(const Domain& domain, int axis, double threshold,
                          double value_below, double value_above);
  /// Singular family c |x-x0|^-alpha + offset. Enforces the integrability
  /// guard alpha < p*s; rejects a singularity sitting exactly on a center.
  static WeightField singular(const Domain& domain, double c,
                              std::array<double, 2> x0, double alpha, double offset,
                              double p, double s);
  static WeightField from_values(const Domain& domain, Eigen::VectorXd values);
  /// One value per interior cell in enumeration order (last CSV field per row).
  static WeightField from_csv(const Domain& domain, const std::string& path);
  /// Synthetic field not backed by a Domain (tests, ad-hoc kernels).
  static WeightField from_raw(Eigen::VectorXd values, double cell_volume);

  int size() const { return static_cast<int>(values.size()); }
};

/// Φ(u): double sum over ordered pairs of w_ij |u_i-u_j|^p plus the Dirichlet
/// tail Σ k_i |u_i|^p vol. Nonnegative, zero only at u = 0.
double gagliardo_energy(const FractionalKernel& kernel, double p, const GridFunction& u);

/// Exact gradient of gagliardo_energy under the ordered-pair convention:
/// component i is 2p Σ_j w_ij |u_i-u_j|^{p-2}(u_i-u_j) + p k_i |u_i|^{p-2} u_i vol.
GridFunction gagliardo_gradient(const FractionalKernel& kernel, double p,
                                const GridFunction& u);

/// Ψ_m(u) = Σ m_i |u_i|^p vol; may be negative or zero.
double weighted_lp_energy(const WeightField& weight, double p, const GridFunction& u);

GridFunction weighted_lp_gradient(const WeightField& weight, double p,
                                  const GridFunction& u);

/// ‖Φ'(u) - λ Ψ'_m(u)‖ / ‖Φ'(u)‖ (Euclidean); zero exactly at discrete
/// eigenpairs. Scale-free in u. Throws on u = 0.
double residual_norm(const FractionalKernel& kernel, const WeightField& weight,
                     double p, double lambda, const GridFunction& u);

}  // namespace fplap
