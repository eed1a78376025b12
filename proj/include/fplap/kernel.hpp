#pragma once

#include <Eigen/Dense>
#include <iosfwd>

#include "fplap/domain.hpp"

namespace fplap {

/// Discrete Gagliardo seminorm data: symmetric pairwise interaction weights
/// w_ij ~ ∫_i ∫_j |x-y|^-(N+ps) between interior cells, plus the Dirichlet
/// tail coefficient k_i ~ 2 ∫_{exterior} |x_i-y|^-(N+ps) dy per cell coming
/// from the zero-extension convention. Assembled once per (domain, s, p);
/// the singularity strength depends on p через the exponent, so kernels must
/// not be reused across p values.
struct FractionalKernel {
  double s = 0.0;
  double p = 0.0;           // value the kernel was assembled for
  double exponent = 0.0;    // N + p*s, kept for audit
  int dim = 0;
  double cell_volume = 0.0;
  Eigen::MatrixXd pair_weights;    // symmetric, zero diagonal, strictly positive off it
  Eigen::VectorXd exterior_coeff;  // strictly positive

  int num_cells() const { return static_cast<int>(exterior_coeff.size()); }

  /// Matrix A of the p=2 quadratic form: u^T A u equals the Gagliardo energy
  /// at p=2 on this kernel's weights. Symmetric positive definite.
  Eigen::MatrixXd quadratic_form_matrix() const;
};

/// Assembles the kernel. Far cell pairs (center distance > 2h) use the
/// midpoint rule h^{2N} |x_i-x_j|^-(N+ps); near pairs use recursive dyadic
/// subdivision with composite-midpoint leaves, cached per center offset.
/// Requires 0 < s < 1, p > 1 and p*s < N (p*s < 1 in dimension 1).
FractionalKernel assemble_kernel(const Domain& domain, double s, double p);

/// Dirichlet tail coefficient for one cell: closed form in 1D, extended-grid
/// midpoint quadrature plus analytic radial tail beyond R = 4*diam(box) in 2D.
double exterior_tail(const Domain& domain, double s, double p, int cell_index);

/// Integral of the radial kernel beyond radius R in 2D:
/// 2 ∫_{|y|>R} |y|^-(2+ps) dy = (4π/ps) R^-ps.
double exterior_radial_tail(double radius, double ps);

/// Writes the pair-weight matrix followed by the tail coefficients as CSV.
void dump_kernel_csv(const FractionalKernel& kernel, std::ostream& out);

}  // namespace fplap
