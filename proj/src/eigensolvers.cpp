#include "fplap/eigensolvers.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>

namespace fplap {

namespace {

using detail::pow_abs;
using detail::signed_pow;

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::optional<GridFunction> try_normalize(const GridFunction& u,
                                          const WeightField& w, double p) {
  const double psi = weighted_lp_energy(w, p, u);
  if (!(psi > 0.0)) return std::nullopt;
  return u * std::pow(psi, -1.0 / p);
}

// Regularized weighted-Laplacian matrix of the linearization at u: pair
// weights w_ij |u_i-u_j|^{p-2} and tail k_i |u_i|^{p-2}, differences clamped
// at ereg times the scale of u. SPD for every p > 1.
Eigen::MatrixXd kacanov_matrix(const FractionalKernel& kernel, double p,
                               const GridFunction& u, double ereg) {
  const int n = kernel.num_cells();
  double scale = u.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      scale = std::max(scale, std::abs(u(i) - u(j)));
  const double floor = std::max(ereg * scale, 1e-300);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double w =
          kernel.pair_weights(i, j) * pow_abs(std::max(std::abs(u(i) - u(j)), floor),
                                              p - 2.0);
      a(i, j) = -2.0 * w;
      a(j, i) = -2.0 * w;
    }
  }
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) row -= a(i, j);
    const double ku = kernel.exterior_coeff(i) *
                      pow_abs(std::max(std::abs(u(i)), floor), p - 2.0);
    a(i, i) = row + ku * kernel.cell_volume;
  }
  return a;
}

struct Lambda1Workspace {
  const FractionalKernel& kernel;
  const WeightField& weight;
  double p;

  double phi(const GridFunction& u) const { return gagliardo_energy(kernel, p, u); }
  GridFunction phi_grad(const GridFunction& u) const {
    return gagliardo_gradient(kernel, p, u);
  }
  GridFunction psi_grad(const GridFunction& u) const {
    return weighted_lp_gradient(weight, p, u);
  }
};

// Preconditioned Lagrangian direction d = A_u^{-1} (Φ'(u) - λ Ψ'(u)), with the
// regularization tied to the current relative residual. Falls back to the raw
// gradient if the factorization degenerates.
GridFunction descent_direction(const Lambda1Workspace& ws, const GridFunction& u,
                               const GridFunction& g, double rel_residual) {
  const double ereg = std::clamp(0.1 * rel_residual, 1e-13, 1e-2);
  Eigen::MatrixXd a = kacanov_matrix(ws.kernel, ws.p, u, ereg);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return g;
  GridFunction d = llt.solve(g);
  if (!d.allFinite() || g.dot(d) <= 0.0) return g;
  return d;
}

GridFunction random_positive_start(const FractionalKernel& kernel,
                                   const WeightField& weight, double p,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = kernel.num_cells();
  for (int attempt = 0; attempt < 10; ++attempt) {
    GridFunction u0(n);
    for (int i = 0; i < n; ++i) {
      const double draw = unit(rng);
      u0(i) = weight.values(i) > 0.0 ? draw : 0.0;
    }
    if (auto u = try_normalize(u0, weight, p)) return *u;
  }
  throw std::runtime_error(
      "solve_lambda1: could not normalize a starting point on the positive support");
}

// Bordered Newton solve of Φ'(u) = λ Ψ'(u), Ψ(u) = 1 from a warm start.
// Returns the normalized limit with its eigenvalue and relative residual.
struct PolishResult {
  GridFunction u;
  double lambda;
  double residual;
};

std::optional<PolishResult> newton_polish(const FractionalKernel& kernel,
                                          const WeightField& weight, double p,
                                          const GridFunction& u0, double lambda0,
                                          double tol = 1e-11, int max_iter = 80) {
  const int n = kernel.num_cells();
  const double ereg = 1e-10;
  GridFunction u = u0;
  double lambda = lambda0;
  auto residual = [&](const GridFunction& uu, double ll, GridFunction& r) {
    r = gagliardo_gradient(kernel, p, uu) - ll * weighted_lp_gradient(weight, p, uu);
    const double denom = gagliardo_gradient(kernel, p, uu).norm();
    return denom > 0.0 ? r.norm() / denom : 1.0;
  };
  GridFunction r(n);
  double rn = residual(u, lambda, r);
  for (int it = 0; it < max_iter && rn >= tol; ++it) {
    // Hessian of Φ equals p(p-1) times the Kačanov matrix at u.
    Eigen::MatrixXd h = kacanov_matrix(kernel, p, u, ereg);
    h *= p * (p - 1.0);
    Eigen::VectorXd hpsi(n);
    for (int i = 0; i < n; ++i) {
      const double au = std::max(std::abs(u(i)), 1e-300);
      hpsi(i) = p * (p - 1.0) * weight.values(i) * pow_abs(au, p - 2.0) *
                weight.cell_volume;
    }
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
    jac.topLeftCorner(n, n) = h - hpsi.asDiagonal().toDenseMatrix() * lambda;
    const GridFunction gpsi = weighted_lp_gradient(weight, p, u);
    jac.block(0, n, n, 1) = -gpsi;
    jac.block(n, 0, 1, n) = gpsi.transpose();
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = -r;
    rhs(n) = 1.0 - weighted_lp_energy(weight, p, u);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    Eigen::VectorXd dz = lu.solve(rhs);
    if (!dz.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    GridFunction rr(n);
    while (t > 1e-10) {
      GridFunction un = u + t * dz.head(n);
      const double ln = lambda + t * dz(n);
      const double rrn = residual(un, ln, rr);
      if (rrn < rn * (1.0 - 0.25 * t) || rrn < tol) {
        u = std::move(un);
        lambda = ln;
        r = rr;
        rn = rrn;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  auto un = try_normalize(u, weight, p);
  if (!un) return std::nullopt;
  PolishResult out;
  out.u = std::move(*un);
  out.lambda = gagliardo_energy(kernel, p, out.u);
  GridFunction rf(n);
  out.residual = residual(out.u, out.lambda, rf);
  return out;
}

double path_lse(const std::vector<double>& energies, double tau) {
  const double mx = *std::max_element(energies.begin(), energies.end());
  double acc = 0.0;
  for (double e : energies) acc += std::exp(tau * (e - mx) / mx);
  return mx + mx / tau * std::log(acc);
}

}  // namespace

GridFunction normalize_to_sphere(const GridFunction& u, const WeightField& weight,
                                 double p) {
  auto v = try_normalize(u, weight, p);
  if (!v)
    throw std::domain_error(
        "normalize_to_sphere: weighted p-energy is not positive (the function is "
        "not normalizable against this weight)");
  return *v;
}

void apply_sign_convention(GridFunction& u) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < u.size(); ++i) {
    const double a = std::abs(u(i));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (u(arg) < 0.0) u = -u;
}

EigenPair solve_lambda1(const FractionalKernel& kernel, const WeightField& weight,
                        double p, const SolverConfig& config) {
  if (kernel.num_cells() != weight.size())
    throw std::invalid_argument("solve_lambda1: kernel/weight size mismatch");
  if (!(p > 1.0)) throw std::invalid_argument("solve_lambda1: p > 1 required");
  Lambda1Workspace ws{kernel, weight, p};
  std::mt19937_64 rng(config.seed);
  GridFunction u = random_positive_start(kernel, weight, p, rng);
  double lambda = ws.phi(u);

  const int n = kernel.num_cells();
  const double noise_floor = 200.0 * kEps * std::sqrt(static_cast<double>(n));
  double t_prev = config.step_init;
  bool polish_phase = false;
  double fixed_step = 0.0;
  double best_res = std::numeric_limits<double>::infinity();
  GridFunction best_u = u;
  double best_lambda = lambda;
  int since_best = 0;
  int it = 0;
  double res = 1.0;

  for (; it < config.max_iter; ++it) {
    const GridFunction gphi = ws.phi_grad(u);
    GridFunction g = gphi - lambda * ws.psi_grad(u);
    res = g.norm() / gphi.norm();
    if (config.progress_logger) config.progress_logger(it, lambda, res);
    if (res < config.tol_residual) break;
    GridFunction d = descent_direction(ws, u, g, res);
    double gd = g.dot(d);
    if (gd <= 0.0) {
      d = g;
      gd = g.squaredNorm();
    }
    const double alpha0 = lambda / gd;  // scale-free step normalization

    if (!polish_phase) {
      double t = std::min(t_prev / config.armijo_factor, config.step_init);
      bool accepted = false;
      while (t > 1e-16) {
        const double need = 1e-4 * t * lambda;
        if (need < noise_floor * lambda) break;  // decrease no longer measurable
        if (auto un = try_normalize(u - (t * alpha0) * d, weight, p)) {
          const double ln = ws.phi(*un);
          if (ln <= lambda - need) {
            u = std::move(*un);
            lambda = ln;
            t_prev = t;
            accepted = true;
            break;
          }
        }
        t *= config.armijo_factor;
      }
      if (accepted) continue;
      polish_phase = true;  // Armijo hit the rounding floor; switch to fixed steps
      fixed_step = std::max(t, 1e-10) * alpha0;
      best_res = res;
      best_u = u;
      best_lambda = lambda;
      since_best = 0;
    }

    if (res < best_res) {
      best_res = res;
      best_u = u;
      best_lambda = lambda;
      since_best = 0;
    } else if (++since_best >= 8) {
      fixed_step *= 0.5;
      u = best_u;
      lambda = best_lambda;
      since_best = 0;
      continue;
    }
    if (auto un = try_normalize(u - fixed_step * d, weight, p)) {
      u = std::move(*un);
      lambda = ws.phi(u);
    } else {
      fixed_step *= 0.5;
    }
  }

  if (polish_phase && best_res < res) {
    u = best_u;
    lambda = best_lambda;
    res = best_res;
  }
  apply_sign_convention(u);
  EigenPair out;
  out.lambda = lambda;
  out.u = std::move(u);
  out.residual = res;
  out.iterations = it;
  out.converged = res < config.tol_residual;
  return out;
}

SimplicityReport check_simplicity(const FractionalKernel& kernel,
                                  const WeightField& weight, double p,
                                  const SolverConfig& config, int trials) {
  if (trials < 1) throw std::invalid_argument("check_simplicity: trials >= 1");
  SimplicityReport report;
  std::vector<GridFunction> funcs;
  report.all_converged = true;
  for (int t = 0; t < trials; ++t) {
    SolverConfig c = config;
    c.seed = config.seed + static_cast<std::uint64_t>(t);
    EigenPair pair = solve_lambda1(kernel, weight, p, c);
    if (!pair.converged)
      throw std::runtime_error("check_simplicity: trial " + std::to_string(t) +
                               " did not converge");
    report.lambdas.push_back(pair.lambda);
    funcs.push_back(std::move(pair.u));
  }
  const auto [lo, hi] = std::minmax_element(report.lambdas.begin(),
                                            report.lambdas.end());
  report.lambda_spread = *hi - *lo;
  for (std::size_t a = 0; a < funcs.size(); ++a)
    for (std::size_t b = a + 1; b < funcs.size(); ++b)
      report.max_eigenfunction_distance =
          std::max(report.max_eigenfunction_distance,
                   (funcs[a] - funcs[b]).lpNorm<Eigen::Infinity>());
  return report;
}

PathMinimaxResult solve_lambda2_path(const FractionalKernel& kernel,
                                     const WeightField& weight, double p,
                                     const GridFunction& e1,
                                     const SolverConfig& config) {
  const int n = kernel.num_cells();
  const int K = config.path_points;
  if (K < 8) throw std::invalid_argument("solve_lambda2_path: path_points >= 8");
  if (e1.size() != n)
    throw std::invalid_argument("solve_lambda2_path: e1 size mismatch");
  const double lambda1 = gagliardo_energy(kernel, p, e1);
  std::mt19937_64 rng(config.seed + 1000);

  // Sign-changing seed: split e1's support at a cut where both halves carry
  // positive weighted p-mass; the halves have disjoint supports, so the
  // difference of the separately normalized halves lies exactly on the sphere.
  GridFunction mid;
  {
    std::vector<int> cuts;
    for (int c = 1; c < n; ++c) {
      GridFunction ua = e1, ub = e1;
      ua.tail(n - c).setZero();
      ub.head(c).setZero();
      if (weighted_lp_energy(weight, p, ua) > 0.0 &&
          weighted_lp_energy(weight, p, ub) > 0.0)
        cuts.push_back(c);
    }
    if (!cuts.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, cuts.size() - 1);
      const int c = cuts[pick(rng)];
      GridFunction ua = e1, ub = e1;
      ua.tail(n - c).setZero();
      ub.head(c).setZero();
      const double pa = weighted_lp_energy(weight, p, ua);
      const double pb = weighted_lp_energy(weight, p, ub);
      mid = std::pow(0.5 / pa, 1.0 / p) * ua - std::pow(0.5 / pb, 1.0 / p) * ub;
    } else {
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (int attempt = 0; attempt < 100 && mid.size() == 0; ++attempt) {
        GridFunction v0(n);
        for (int i = 0; i < n; ++i) v0(i) = gauss(rng);
        if ((v0.array() >= 0.0).all() || (v0.array() <= 0.0).all()) continue;
        if (auto v = try_normalize(v0, weight, p)) mid = std::move(*v);
      }
      if (mid.size() == 0)
        throw std::runtime_error(
            "solve_lambda2_path: no normalizable sign-changing seed found");
    }
  }

  auto norm_with_pullback = [&](const GridFunction& w)
      -> std::optional<GridFunction> {
    if (auto u = try_normalize(w, weight, p)) return u;
    double eps = 1e-3;
    for (int i = 0; i < 100 && eps <= 100.0; ++i, eps *= 1.26) {
      if (auto u = try_normalize(w + eps * e1, weight, p)) return u;
    }
    return std::nullopt;
  };

  std::vector<GridFunction> pts(K);
  std::vector<double> energy(K);
  for (int k = 0; k < K; ++k) {
    const double theta = M_PI * k / K;
    const GridFunction w = std::cos(theta) * e1 + std::sin(theta) * mid;
    auto u = norm_with_pullback(w);
    pts[k] = u ? std::move(*u) : e1;
    energy[k] = gagliardo_energy(kernel, p, pts[k]);
  }
  const double energy_cap =
      std::max(10.0 * *std::max_element(energy.begin(), energy.end()),
               100.0 * std::max(lambda1, 1.0));

  auto norm_capped = [&](const GridFunction& w) -> std::optional<GridFunction> {
    if (auto u = try_normalize(w, weight, p)) {
      if (gagliardo_energy(kernel, p, *u) <= energy_cap) return u;
    }
    double eps = 1e-3;
    for (int i = 0; i < 100 && eps <= 100.0; ++i, eps *= 1.26) {
      if (auto u = try_normalize(w + eps * e1, weight, p)) {
        if (gagliardo_energy(kernel, p, *u) <= energy_cap) return u;
      }
    }
    return std::nullopt;
  };

  Eigen::LLT<Eigen::MatrixXd> spd(kernel.quadratic_form_matrix());
  const bool have_spd = spd.info() == Eigen::Success;

  // reparametrize to equal chord spacing along the closed odd loop
  auto redistribute = [&](std::vector<GridFunction>& f) {
    std::vector<GridFunction> loop(f.begin(), f.end());
    loop.push_back(-f[0]);
    std::vector<double> cum(loop.size(), 0.0);
    for (std::size_t i = 1; i < loop.size(); ++i)
      cum[i] = cum[i - 1] + (loop[i] - loop[i - 1]).norm();
    const double total = cum.back();
    if (!(total > 0.0)) return;
    std::vector<GridFunction> out(K);
    out[0] = f[0];
    for (int j = 1; j < K; ++j) {
      const double target = total * j / K;
      std::size_t seg =
          std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
      seg = std::clamp<std::size_t>(seg, 1, loop.size() - 1) - 1;
      const double len = std::max(cum[seg + 1] - cum[seg], 1e-300);
      const double a = (target - cum[seg]) / len;
      const GridFunction w = (1.0 - a) * loop[seg] + a * loop[seg + 1];
      auto u = norm_capped(w);
      out[j] = u ? std::move(*u) : f[j];
    }
    f = std::move(out);
  };

  std::vector<double> temps = config.lse_temperatures;
  if (temps.empty()) temps = {10.0 * K, 100.0 * K, 1000.0 * K};
  const int stage_cap = std::clamp(
      config.max_iter / static_cast<int>(10 * temps.size()), 200, 2000);

  int total_iters = 0;
  std::vector<GridFunction> trial(K);
  std::vector<double> trial_energy(K);
  for (double tau : temps) {
    double t_prev = 0.5;
    std::vector<double> history;
    for (int it = 0; it < stage_cap; ++it) {
      ++total_iters;
      const double mx = *std::max_element(energy.begin(), energy.end());
      std::vector<GridFunction> step(K);
      for (int k = 0; k < K; ++k) {
        const double sigma = std::exp(tau * (energy[k] - mx) / mx);
        if (sigma < 1e-14) continue;
        const GridFunction gphi = gagliardo_gradient(kernel, p, pts[k]);
        GridFunction g = gphi - energy[k] * weighted_lp_gradient(weight, p, pts[k]);
        GridFunction d = have_spd ? GridFunction(spd.solve(g)) : g;
        if (!d.allFinite()) d = g;
        const double gd = g.dot(d);
        if (gd <= 0.0) continue;
        step[k] = (sigma * energy[k] / gd) * d;
      }
      const double obj = path_lse(energy, tau);
      double t = std::min(2.0 * t_prev, 0.5);
      bool accepted = false;
      while (t > 1e-13) {
        bool ok = true;
        for (int k = 0; k < K; ++k) {
          const GridFunction w =
              step[k].size() ? GridFunction(pts[k] - t * step[k]) : pts[k];
          auto u = try_normalize(w, weight, p);
          if (!u) {
            ok = false;
            break;
          }
          trial_energy[k] = gagliardo_energy(kernel, p, *u);
          if (trial_energy[k] > energy_cap) {
            ok = false;
            break;
          }
          trial[k] = std::move(*u);
        }
        if (ok) {
          const double obj_new = path_lse(trial_energy, tau);
          if (obj_new <= obj * (1.0 - 1e-6 * t) || obj_new <= obj * (1.0 + 1e-14)) {
            accepted = true;
            break;
          }
        }
        t *= 0.5;
      }
      if (!accepted) break;
      pts.swap(trial);
      redistribute(pts);
      for (int k = 0; k < K; ++k) energy[k] = gagliardo_energy(kernel, p, pts[k]);
      t_prev = t;
      history.push_back(*std::max_element(energy.begin(), energy.end()));
      if (history.size() > 40) {
        const double prev = history[history.size() - 41];
        if (std::abs(history.back() - prev) < 1e-10 * std::abs(history.back()))
          break;  // path maximum has stabilized for this stage
      }
    }
  }

  // Newton polish of the maximal point, then of any shoulder left above it.
  PathMinimaxResult out;
  out.iterations = total_iters;
  const auto argmax = static_cast<int>(
      std::max_element(energy.begin(), energy.end()) - energy.begin());
  bool polished = false;
  double polished_lambda = 0.0;
  const double res_gate = std::max(config.tol_residual, 1e-11);
  if (auto pol = newton_polish(kernel, weight, p, pts[argmax], energy[argmax])) {
    const bool nodal = (pol->u.array() > 0.0).any() && (pol->u.array() < 0.0).any();
    if (pol->residual < res_gate && pol->lambda > lambda1 * (1.0 + 1e-10) && nodal) {
      pts[argmax] = pol->u;
      energy[argmax] = pol->lambda;
      out.residual = pol->residual;
      polished = true;
      polished_lambda = pol->lambda;
      for (int k = 0; k < K; ++k) {
        if (energy[k] <= polished_lambda * (1.0 + 1e-12)) continue;
        if (auto shoulder = newton_polish(kernel, weight, p, pts[k], energy[k])) {
          const bool nodal_k =
              (shoulder->u.array() > 0.0).any() && (shoulder->u.array() < 0.0).any();
          if (shoulder->residual < res_gate &&
              shoulder->lambda > lambda1 * (1.0 + 1e-10) && nodal_k &&
              shoulder->lambda <= energy[k] * (1.0 + 1e-9)) {
            pts[k] = shoulder->u;
            energy[k] = shoulder->lambda;
          }
        }
      }
    }
  }

  const auto final_argmax = static_cast<int>(
      std::max_element(energy.begin(), energy.end()) - energy.begin());
  out.estimate = energy[final_argmax];
  out.max_point = pts[final_argmax];
  if (!polished)
    out.residual = residual_norm(kernel, weight, p, out.estimate, out.max_point);
  // converged means: the path max is a polished eigenpair (no rough shoulder
  // left above the converged eigenvalue)
  out.converged = polished && out.residual < res_gate &&
                  out.estimate <= polished_lambda * (1.0 + 1e-9);
  out.path.points = std::move(pts);
  out.path.energies = std::move(energy);
  for (int k = 0; k < K; ++k) {
    const GridFunction& a = out.path.points[k];
    const GridFunction b = (k + 1 < K) ? out.path.points[k + 1]
                                       : GridFunction(-out.path.points[0]);
    const double d = (b - a).norm();
    out.path.total_length += d;
    out.path.max_adjacent_gap = std::max(out.path.max_adjacent_gap, d);
  }
  out.path.total_length *= 2.0;  // stored arc is half the odd loop
  return out;
}

double lambda2_upper_from_nodal(const FractionalKernel& kernel,
                                const WeightField& weight, double p,
                                const GridFunction& u_nodal, int omega_samples) {
  if (omega_samples < 4)
    throw std::invalid_argument("lambda2_upper_from_nodal: omega_samples >= 4");
  const GridFunction up = u_nodal.cwiseMax(0.0);
  const GridFunction um = (-u_nodal).cwiseMax(0.0);
  if (up.isZero(0.0) || um.isZero(0.0))
    throw std::invalid_argument(
        "lambda2_upper_from_nodal: input must take both signs");
  const double psi_p = weighted_lp_energy(weight, p, up);
  const double psi_m = weighted_lp_energy(weight, p, um);
  if (!(psi_p > 0.0) || !(psi_m > 0.0))
    throw std::invalid_argument(
        "lambda2_upper_from_nodal: both parts need positive weighted p-mass");
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < omega_samples; ++j) {
    const double theta = 2.0 * M_PI * j / omega_samples;
    const double w1 = std::cos(theta);
    const double w2 = std::sin(theta);
    const double K =
        std::pow(pow_abs(w1, p) * psi_p + pow_abs(w2, p) * psi_m, 1.0 / p);
    const GridFunction f = (w1 * up - w2 * um) / K;
    best = std::max(best, gagliardo_energy(kernel, p, f));
  }
  return best;
}

OracleSpectrum p2_oracle_spectrum(const FractionalKernel& kernel,
                                  const WeightField& weight, int count) {
  if (count < 1) throw std::invalid_argument("p2_oracle_spectrum: count >= 1");
  if (std::abs(kernel.p - 2.0) > 1e-12)
    throw std::invalid_argument("p2_oracle_spectrum: kernel must be assembled at p=2");
  const int n = kernel.num_cells();
  if (weight.size() != n)
    throw std::invalid_argument("p2_oracle_spectrum: size mismatch");
  const Eigen::MatrixXd a = kernel.quadratic_form_matrix();
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("p2_oracle_spectrum: form matrix not positive definite");
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::VectorXd mdiag = weight.values * weight.cell_volume;
  // B = L^-1 M L^-T, symmetric; eigenvalues mu of B give lambda = 1/mu.
  Eigen::MatrixXd b = l.triangularView<Eigen::Lower>().solve(
      Eigen::MatrixXd(mdiag.asDiagonal()));
  b = l.triangularView<Eigen::Lower>()
          .solve(Eigen::MatrixXd(b.transpose()))
          .transpose();
  b = 0.5 * (b + b.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("p2_oracle_spectrum: eigensolver failed");
  const Eigen::VectorXd mu = es.eigenvalues();
  const double mu_floor = 1e-14 * mu.cwiseAbs().maxCoeff();

  OracleSpectrum out;
  for (int idx = n - 1; idx >= 0 && static_cast<int>(out.pairs.size()) < count;
       --idx) {
    if (!(mu(idx) > mu_floor)) break;  // eigenvalues sorted ascending by Eigen
    GridFunction u = l.transpose().triangularView<Eigen::Upper>().solve(
        es.eigenvectors().col(idx));
    u = normalize_to_sphere(u, weight, 2.0);
    apply_sign_convention(u);
    EigenPair pair;
    pair.lambda = gagliardo_energy(kernel, 2.0, u);
    pair.u = std::move(u);
    pair.residual = residual_norm(kernel, weight, 2.0, pair.lambda, pair.u);
    pair.iterations = 0;
    pair.converged = true;
    out.pairs.push_back(std::move(pair));
  }
  out.truncated = static_cast<int>(out.pairs.size()) < count;
  return out;
}

double compute_monotonicity_constant(const FractionalKernel& kernel,
                                     const WeightField& m, const WeightField& m_tilde,
                                     double p, double lambda_cap,
                                     const SolverConfig& config) {
  const int n = kernel.num_cells();
  if (m.size() != n || m_tilde.size() != n)
    throw std::invalid_argument("compute_monotonicity_constant: size mismatch");
  if (((m_tilde.values - m.values).array() < -1e-14).any())
    throw std::invalid_argument(
        "compute_monotonicity_constant: requires m <= m_tilde componentwise");
  EigenPair first = solve_lambda1(kernel, m, p, config);
  if (!(lambda_cap > first.lambda))
    throw std::invalid_argument(
        "compute_monotonicity_constant: lambda_cap must exceed the first eigenvalue");
  const GridFunction e1 = first.u;

  auto phi = [&](const GridFunction& u) { return gagliardo_energy(kernel, p, u); };
  auto feasible_pullback = [&](GridFunction u) -> std::optional<GridFunction> {
    if (phi(u) <= lambda_cap) return u;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
      const double t = 0.5 * (lo + hi);
      auto w = try_normalize((1.0 - t) * u + t * e1, m, p);
      if (!w) {
        lo = t;
        continue;
      }
      if (phi(*w) <= lambda_cap)
        hi = t;
      else
        lo = t;
    }
    auto w = try_normalize((1.0 - hi) * u + hi * e1, m, p);
    if (!w || phi(*w) > lambda_cap * (1.0 + 1e-9)) return std::nullopt;
    return w;
  };

  std::mt19937_64 rng(config.seed + 5000);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double e1_scale = e1.cwiseAbs().maxCoeff();
  const std::array<double, 3> rhos{1e2, 1e4, 1e6};
  double best = std::numeric_limits<double>::infinity();

  for (int start = 0; start < 8; ++start) {
    GridFunction u0 = e1;
    if (start > 0)
      for (int i = 0; i < n; ++i) u0(i) += 0.5 * e1_scale * gauss(rng);
    auto u_opt = try_normalize(u0, m, p);
    if (!u_opt) continue;
    auto uf = feasible_pullback(*u_opt);
    if (!uf) continue;
    GridFunction u = *uf;

    for (double rho : rhos) {
      auto objective = [&](const GridFunction& w) {
        const double viol = std::max(0.0, phi(w) / lambda_cap - 1.0);
        return weighted_lp_energy(m_tilde, p, w) + rho * viol * viol;
      };
      double t_prev = 0.5;
      for (int it = 0; it < 400; ++it) {
        const double viol = std::max(0.0, phi(u) / lambda_cap - 1.0);
        GridFunction grad = weighted_lp_gradient(m_tilde, p, u) +
                            (2.0 * rho * viol / lambda_cap) *
                                gagliardo_gradient(kernel, p, u);
        // project onto the sphere tangent using <Ψ'_m(u), u> = p
        const GridFunction gpsi = weighted_lp_gradient(m, p, u);
        GridFunction d = grad - (grad.dot(u) / p) * gpsi;
        const double dn2 = d.squaredNorm();
        if (!(dn2 > 0.0)) break;
        const double obj = objective(u);
        const double alpha0 = std::max(std::abs(obj), 1e-300) / dn2;
        double t = std::min(2.0 * t_prev, 1.0);
        bool accepted = false;
        while (t > 1e-14) {
          if (auto un = try_normalize(u - (t * alpha0) * d, m, p)) {
            const double on = objective(*un);
            if (on <= obj * (1.0 - 1e-6 * t) || on <= obj - 1e-15 * std::abs(obj)) {
              u = std::move(*un);
              t_prev = t;
              accepted = true;
              break;
            }
          }
          t *= 0.5;
        }
        if (!accepted) break;
      }
    }
    if (auto final_u = feasible_pullback(u))
      best = std::min(best, weighted_lp_energy(m_tilde, p, *final_u));
  }
  if (!std::isfinite(best))
    throw std::runtime_error(
        "compute_monotonicity_constant: no feasible starting point found "
        "(lambda_cap too small)");
  return best;
}

}  // namespace fplap
