#pragma once

#include <string>

#include "fplap/energy.hpp"

namespace fplap {

/// LHS-RHS difference of an elementary inequality, oriented so validity means
/// gap >= 0, plus a textual record of the sampled inputs.
struct GapResult {
  double gap = 0.0;
  std::string inputs_digest;
};

/// a^p + b^p <= 2^{p-1} (a+b)^p for a, b >= 0.
GapResult convexity_gap(double a, double b, double p);

/// |a^q - b^q| <= q max(a^{q-1}, b^{q-1}) |a-b| for a, b > 0 (>= 0 when q >= 1).
GapResult lagrange_gap(double a, double b, double q);

/// Clarkson inequalities in the weighted L^p space over the positive part of
/// the weight: first form for p >= 2, second form for p in (1,2).
GapResult clarkson_gap(const GridFunction& u, const GridFunction& v, double p,
                       const WeightField& weight_positive_part);

/// Hidden convexity along w_t = [(1-t) u^p + t v^p]^{1/p} for positive u, v:
/// Φ(w_t) <= (1-t) Φ(u) + t Φ(v).
GapResult hidden_convexity_gap(const FractionalKernel& kernel, double p,
                               const GridFunction& u, const GridFunction& v, double t);

/// Discrete Picone inequality with the epsilon-shifted denominator:
/// |v(x)-v(y)|^p >= |u(x)-u(y)|^{p-2}(u(x)-u(y)) (w(x)-w(y)),
/// w(z) = v(z)^p / (u(z)+eps)^{p-1}. Arguments: v values (ax, ay), u values
/// (bx, by), all >= 0, eps > 0.
GapResult picone_gap(double ax, double ay, double bx, double by, double p, double eps);

/// Pointwise inequality behind the odd-path bound, for U, V derived from the
/// positive/negative parts of sampled function values (so U V <= 0) and a unit
/// omega.
GapResult scd5_gap(double U, double V, double omega1, double omega2, double p);

/// Φ(|u|) <= Φ(u): absolute-value contraction of the Gagliardo energy.
GapResult absolute_value_contraction_gap(const FractionalKernel& kernel, double p,
                                         const GridFunction& u);

}  // namespace fplap
