#include "fplap/inequalities.hpp"

#include <cstdio>
#include <stdexcept>

namespace fplap {

namespace {

std::string digest(std::initializer_list<std::pair<const char*, double>> kv) {
  std::string out;
  char buf[64];
  for (const auto& [name, value] : kv) {
    std::snprintf(buf, sizeof buf, "%s=%.17g;", name, value);
    out += buf;
  }
  return out;
}

using detail::pow_abs;
using detail::signed_pow;

}  // namespace

GapResult convexity_gap(double a, double b, double p) {
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("convexity_gap: a, b >= 0");
  const double gap =
      std::pow(2.0, p - 1.0) * pow_abs(a + b, p) - pow_abs(a, p) - pow_abs(b, p);
  return {gap, digest({{"a", a}, {"b", b}, {"p", p}})};
}

GapResult lagrange_gap(double a, double b, double q) {
  if (q < 1.0 && (a <= 0.0 || b <= 0.0))
    throw std::invalid_argument("lagrange_gap: a, b > 0 required when q < 1");
  if (a < 0.0 || b < 0.0) throw std::invalid_argument("lagrange_gap: a, b >= 0");
  const double lhs = std::abs(pow_abs(a, q) - pow_abs(b, q));
  const double rhs =
      q * std::max(pow_abs(a, q - 1.0), pow_abs(b, q - 1.0)) * std::abs(a - b);
  return {rhs - lhs, digest({{"a", a}, {"b", b}, {"q", q}})};
}

GapResult clarkson_gap(const GridFunction& u, const GridFunction& v, double p,
                       const WeightField& weight_positive_part) {
  if ((weight_positive_part.values.array() < 0.0).any())
    throw std::invalid_argument("clarkson_gap: weight must be nonnegative");
  if (!(p > 1.0)) throw std::invalid_argument("clarkson_gap: p > 1");
  const auto& w = weight_positive_part;
  const GridFunction mid = 0.5 * (u + v);
  const GridFunction dif = 0.5 * (u - v);
  double gap;
  if (p >= 2.0) {
    gap = 0.5 * (weighted_lp_energy(w, p, u) + weighted_lp_energy(w, p, v)) -
          weighted_lp_energy(w, p, mid) - weighted_lp_energy(w, p, dif);
  } else {
    // second inequality: ||mid||^p' + ||dif||^p' <= [ (||u||^p + ||v||^p)/2 ]^{p'-1}
    const double pc = p / (p - 1.0);
    const double lhs = std::pow(weighted_lp_energy(w, p, mid), pc / p) +
                       std::pow(weighted_lp_energy(w, p, dif), pc / p);
    const double rhs = std::pow(
        0.5 * (weighted_lp_energy(w, p, u) + weighted_lp_energy(w, p, v)), pc - 1.0);
    gap = rhs - lhs;
  }
  return {gap, digest({{"p", p}, {"n", static_cast<double>(u.size())}})};
}

GapResult hidden_convexity_gap(const FractionalKernel& kernel, double p,
                               const GridFunction& u, const GridFunction& v,
                               double t) {
  if ((u.array() <= 0.0).any() || (v.array() <= 0.0).any())
    throw std::invalid_argument("hidden_convexity_gap: u, v must be positive");
  if (t < 0.0 || t > 1.0)
    throw std::invalid_argument("hidden_convexity_gap: t in [0,1]");
  GridFunction wt(u.size());
  for (int i = 0; i < u.size(); ++i)
    wt(i) = std::pow((1.0 - t) * std::pow(u(i), p) + t * std::pow(v(i), p), 1.0 / p);
  const double gap = (1.0 - t) * gagliardo_energy(kernel, p, u) +
                     t * gagliardo_energy(kernel, p, v) -
                     gagliardo_energy(kernel, p, wt);
  return {gap, digest({{"p", p}, {"t", t}, {"n", static_cast<double>(u.size())}})};
}

GapResult picone_gap(double ax, double ay, double bx, double by, double p,
                     double eps) {
  if (ax < 0.0 || ay < 0.0 || bx < 0.0 || by < 0.0 || eps <= 0.0)
    throw std::invalid_argument("picone_gap: requires ax, ay, bx, by >= 0 and eps > 0");
  const double wx = pow_abs(ax, p) / pow_abs(bx + eps, p - 1.0);
  const double wy = pow_abs(ay, p) / pow_abs(by + eps, p - 1.0);
  const double gap =
      pow_abs(ax - ay, p) - signed_pow(bx - by, p - 1.0) * (wx - wy);
  return {gap, digest({{"ax", ax}, {"ay", ay}, {"bx", bx}, {"by", by}, {"p", p},
                       {"eps", eps}})};
}

GapResult scd5_gap(double U, double V, double omega1, double omega2, double p) {
  if (std::abs(omega1 * omega1 + omega2 * omega2 - 1.0) > 1e-12)
    throw std::invalid_argument("scd5_gap: omega must lie on the unit circle");
  const double lhs = signed_pow(omega1 * U - omega1 * V, p - 1.0) * omega1 * U -
                     signed_pow(omega2 * U - omega2 * V, p - 1.0) * omega2 * V;
  const double rhs = pow_abs(omega1 * U - omega2 * V, p);
  return {lhs - rhs, digest({{"U", U}, {"V", V}, {"w1", omega1}, {"w2", omega2},
                             {"p", p}})};
}

GapResult absolute_value_contraction_gap(const FractionalKernel& kernel, double p,
                                         const GridFunction& u) {
  const double gap = gagliardo_energy(kernel, p, u) -
                     gagliardo_energy(kernel, p, u.cwiseAbs());
  return {gap, digest({{"p", p}, {"n", static_cast<double>(u.size())}})};
}

}  // namespace fplap
