#include "fplap/kernel.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace fplap {

namespace {

constexpr int kMaxDepth = 8;       // dyadic refinement levels toward the shared face
constexpr double kSeparation = 2.0;  // well-separated when d >= 2 * cell size
constexpr int kLeafPoints = 4;     // composite midpoint points per axis at leaves

struct Box {
  std::array<double, 2> lo;
  std::array<double, 2> hi;
};

double center_dist(const Box& a, const Box& b, int dim) {
  double d2 = 0.0;
  for (int ax = 0; ax < dim; ++ax) {
    const double d = 0.5 * (a.lo[ax] + a.hi[ax]) - 0.5 * (b.lo[ax] + b.hi[ax]);
    d2 += d * d;
  }
  return std::sqrt(d2);
}

double leaf_midpoint(const Box& a, const Box& b, int dim, double expo) {
  const int n = kLeafPoints;
  double total = 0.0;
  if (dim == 1) {
    const double ha = (a.hi[0] - a.lo[0]) / n;
    const double hb = (b.hi[0] - b.lo[0]) / n;
    for (int i = 0; i < n; ++i) {
      const double xa = a.lo[0] + (i + 0.5) * ha;
      for (int j = 0; j < n; ++j) {
        const double xb = b.lo[0] + (j + 0.5) * hb;
        total += ha * hb * std::pow(std::abs(xa - xb), -expo);
      }
    }
    return total;
  }
  const double hax = (a.hi[0] - a.lo[0]) / n, hay = (a.hi[1] - a.lo[1]) / n;
  const double hbx = (b.hi[0] - b.lo[0]) / n, hby = (b.hi[1] - b.lo[1]) / n;
  const double va = hax * hay, vb = hbx * hby;
  for (int ia = 0; ia < n; ++ia)
    for (int ja = 0; ja < n; ++ja) {
      const double xa = a.lo[0] + (ia + 0.5) * hax;
      const double ya = a.lo[1] + (ja + 0.5) * hay;
      for (int ib = 0; ib < n; ++ib)
        for (int jb = 0; jb < n; ++jb) {
          const double dx = xa - (b.lo[0] + (ib + 0.5) * hbx);
          const double dy = ya - (b.lo[1] + (jb + 0.5) * hby);
          total += va * vb * std::pow(std::sqrt(dx * dx + dy * dy), -expo);
        }
    }
  return total;
}

void split(const Box& box, int dim, Box out[4]) {
  const double mx = 0.5 * (box.lo[0] + box.hi[0]);
  if (dim == 1) {
    out[0] = {{box.lo[0], 0.0}, {mx, 0.0}};
    out[1] = {{mx, 0.0}, {box.hi[0], 0.0}};
    return;
  }
  const double my = 0.5 * (box.lo[1] + box.hi[1]);
  out[0] = {{box.lo[0], box.lo[1]}, {mx, my}};
  out[1] = {{mx, box.lo[1]}, {box.hi[0], my}};
  out[2] = {{box.lo[0], my}, {mx, box.hi[1]}};
  out[3] = {{mx, my}, {box.hi[0], box.hi[1]}};
}

double box_pair_integral(const Box& a, const Box& b, int dim, double expo, int depth) {
  double size = 0.0;
  for (int ax = 0; ax < dim; ++ax)
    size = std::max({size, a.hi[ax] - a.lo[ax], b.hi[ax] - b.lo[ax]});
  if (center_dist(a, b, dim) >= kSeparation * size || depth >= kMaxDepth)
    return leaf_midpoint(a, b, dim, expo);
  const int parts = (dim == 1) ? 2 : 4;
  Box sa[4], sb[4];
  split(a, dim, sa);
  split(b, dim, sb);
  double total = 0.0;
  for (int i = 0; i < parts; ++i)
    for (int j = 0; j < parts; ++j)
      total += box_pair_integral(sa[i], sb[j], dim, expo, depth + 1);
  return total;
}

// Near-pair weights depend only on the center offset (uniform grid), keyed by
// the sorted absolute multi-index offset.
double near_pair_weight(std::map<std::pair<int, int>, double>& cache, int di, int dj,
                        int dim, double h, double expo) {
  int a = std::abs(di), b = std::abs(dj);
  if (a < b) std::swap(a, b);
  const auto key = std::make_pair(a, b);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Box box_a{{0.0, 0.0}, {h, dim == 2 ? h : 0.0}};
  Box box_b{{a * h, b * h}, {(a + 1) * h, dim == 2 ? (b + 1) * h : 0.0}};
  const double w = box_pair_integral(box_a, box_b, dim, expo, 0);
  cache.emplace(key, w);
  return w;
}

}  // namespace

Eigen::MatrixXd FractionalKernel::quadratic_form_matrix() const {
  const int n = num_cells();
  Eigen::MatrixXd a = -2.0 * pair_weights;
  for (int i = 0; i < n; ++i)
    a(i, i) = 2.0 * pair_weights.row(i).sum() + exterior_coeff(i) * cell_volume;
  return a;
}

double exterior_radial_tail(double radius, double ps) {
  return 4.0 * M_PI / ps * std::pow(radius, -ps);
}

double exterior_tail(const Domain& domain, double s, double p, int cell_index) {
  if (cell_index < 0 || cell_index >= domain.num_cells())
    throw std::invalid_argument("exterior_tail: cell index out of range");
  const double ps = p * s;
  const auto& x = domain.center(cell_index);
  if (domain.dim() == 1) {
    const double lo = domain.spec().box_lo[0];
    const double hi = domain.spec().box_hi[0];
    const double value =
        2.0 / ps * (std::pow(x[0] - lo, -ps) + std::pow(hi - x[0], -ps));
    if (!std::isfinite(value)) throw std::runtime_error("exterior_tail: non-finite");
    return value;
  }
  // 2D: midpoint sum over exterior cells of the extended lattice within radius
  // R of the cell center, plus the analytic radial tail beyond R.
  const double h = domain.spacing();
  const double radius = 4.0 * domain.diameter();
  const auto& lo = domain.spec().box_lo;
  const double expo = 2.0 + ps;
  const int reach = static_cast<int>(std::ceil(radius / h)) + 1;
  // lattice index of the cell containing x (same lattice as the domain grid)
  const int ci = domain.grid_index(cell_index)[0];
  const int cj = domain.grid_index(cell_index)[1];
  double acc = 0.0;
  for (int j = cj - reach; j <= cj + reach; ++j) {
    for (int i = ci - reach; i <= ci + reach; ++i) {
      const std::array<double, 2> y{lo[0] + (i + 0.5) * h, lo[1] + (j + 0.5) * h};
      if (domain.inside(y)) continue;  // exterior lattice cells only
      const double dx = x[0] - y[0];
      const double dy = x[1] - y[1];
      const double d = std::sqrt(dx * dx + dy * dy);
      if (d > radius) continue;
      acc += h * h * std::pow(d, -expo);
    }
  }
  const double value = 2.0 * acc + exterior_radial_tail(radius, ps);
  if (!std::isfinite(value)) throw std::runtime_error("exterior_tail: non-finite");
  return value;
}

FractionalKernel assemble_kernel(const Domain& domain, double s, double p) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("kernel: s must be in (0,1)");
  if (!(p > 1.0)) throw std::invalid_argument("kernel: p must be > 1");
  const double ps = p * s;
  const double bound = domain.dim() == 1 ? 1.0 : static_cast<double>(domain.dim());
  if (!(ps < bound))
    throw std::invalid_argument("kernel: p*s must be < N (< 1 in dimension 1)");

  FractionalKernel kernel;
  kernel.s = s;
  kernel.p = p;
  kernel.dim = domain.dim();
  kernel.exponent = domain.dim() + ps;
  kernel.cell_volume = domain.cell_volume();

  const int n = domain.num_cells();
  const double h = domain.spacing();
  const double near_cut = 2.0 * h * (1.0 + 1e-12);
  const double far_factor = std::pow(domain.cell_volume(), 2);  // h^{2N}
  kernel.pair_weights = Eigen::MatrixXd::Zero(n, n);
  std::map<std::pair<int, int>, double> near_cache;
  for (int i = 0; i < n; ++i) {
    const auto& xi = domain.center(i);
    const auto& gi = domain.grid_index(i);
    for (int j = i + 1; j < n; ++j) {
      const auto& xj = domain.center(j);
      const double dx = xi[0] - xj[0];
      const double dy = xi[1] - xj[1];
      const double dist = std::sqrt(dx * dx + dy * dy);
      double w;
      if (dist > near_cut) {
        w = far_factor * std::pow(dist, -kernel.exponent);
      } else {
        const auto& gj = domain.grid_index(j);
        w = near_pair_weight(near_cache, gj[0] - gi[0], gj[1] - gi[1], kernel.dim, h,
                             kernel.exponent);
      }
      if (!(std::isfinite(w) && w > 0.0))
        throw std::runtime_error("kernel: non-finite or non-positive pair weight");
      kernel.pair_weights(i, j) = w;
      kernel.pair_weights(j, i) = w;
    }
  }
  kernel.exterior_coeff.resize(n);
  for (int i = 0; i < n; ++i) kernel.exterior_coeff(i) = exterior_tail(domain, s, p, i);
  return kernel;
}

void dump_kernel_csv(const FractionalKernel& kernel, std::ostream& out) {
  const int n = kernel.num_cells();
  char buf[32];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", kernel.pair_weights(i, j));
      out << buf << (j + 1 < n ? "," : "\n");
    }
  }
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", kernel.exterior_coeff(i));
    out << buf << (i + 1 < n ? "," : "\n");
  }
}

}  // namespace fplap
