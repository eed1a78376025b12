#include "fplap/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace fplap {

Shape shape_from_string(const std::string& name) {
  if (name == "interval") return Shape::interval;
  if (name == "rectangle") return Shape::rectangle;
  if (name == "disk") return Shape::disk;
  throw std::invalid_argument("unsupported shape: " + name);
}

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::interval: return "interval";
    case Shape::rectangle: return "rectangle";
    case Shape::disk: return "disk";
  }
  return "?";
}

DomainSpec DomainSpec::interval(double lo, double hi, int n) {
  DomainSpec s;
  s.shape = Shape::interval;
  s.dim = 1;
  s.box_lo = {lo, 0.0};
  s.box_hi = {hi, 1.0};
  s.cells_per_axis = {n, 1};
  return s;
}

DomainSpec DomainSpec::rectangle(std::array<double, 2> lo, std::array<double, 2> hi,
                                 std::array<int, 2> n) {
  DomainSpec s;
  s.shape = Shape::rectangle;
  s.dim = 2;
  s.box_lo = lo;
  s.box_hi = hi;
  s.cells_per_axis = n;
  return s;
}

DomainSpec DomainSpec::disk(std::array<double, 2> lo, std::array<double, 2> hi,
                            std::array<int, 2> n) {
  DomainSpec s = rectangle(lo, hi, n);
  s.shape = Shape::disk;
  return s;
}

bool Domain::inside(const std::array<double, 2>& x) const {
  for (int a = 0; a < spec_.dim; ++a) {
    if (x[a] <= spec_.box_lo[a] || x[a] >= spec_.box_hi[a]) return false;
  }
  if (spec_.shape == Shape::disk) {
    const double cx = 0.5 * (spec_.box_lo[0] + spec_.box_hi[0]);
    const double cy = 0.5 * (spec_.box_lo[1] + spec_.box_hi[1]);
    const double r = 0.5 * (spec_.box_hi[0] - spec_.box_lo[0]);
    const double dx = x[0] - cx;
    const double dy = x[1] - cy;
    return dx * dx + dy * dy < r * r;
  }
  return true;
}

double Domain::diameter() const {
  double d2 = 0.0;
  for (int a = 0; a < spec_.dim; ++a) {
    const double e = spec_.box_hi[a] - spec_.box_lo[a];
    d2 += e * e;
  }
  return std::sqrt(d2);
}

Domain build_grid(const DomainSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2)
    throw std::invalid_argument("domain: dim must be 1 or 2");
  if (spec.shape == Shape::interval && spec.dim != 1)
    throw std::invalid_argument("domain: interval shape requires dim 1");
  if (spec.shape != Shape::interval && spec.dim != 2)
    throw std::invalid_argument("domain: 2D shape requires dim 2");

  Domain dom;
  dom.spec_ = spec;

  double h = 0.0;
  for (int a = 0; a < spec.dim; ++a) {
    if (spec.cells_per_axis[a] < 2)
      throw std::invalid_argument("domain: resolution must be >= 2 per axis");
    if (!(spec.box_hi[a] > spec.box_lo[a]))
      throw std::invalid_argument("domain: degenerate box (lo >= hi)");
    const double ha = (spec.box_hi[a] - spec.box_lo[a]) / spec.cells_per_axis[a];
    if (a == 0) {
      h = ha;
    } else if (std::abs(ha - h) > 1e-12 * h) {
      throw std::invalid_argument("domain: axis spacings differ (grid must be uniform)");
    }
  }
  dom.h_ = h;
  dom.cell_volume_ = (spec.dim == 1) ? h : h * h;

  if (spec.shape == Shape::disk) {
    const double wx = spec.box_hi[0] - spec.box_lo[0];
    const double wy = spec.box_hi[1] - spec.box_lo[1];
    if (std::abs(wx - wy) > 1e-12 * wx)
      throw std::invalid_argument("domain: disk requires a square bounding box");
  }

  const int nx = spec.cells_per_axis[0];
  const int ny = (spec.dim == 2) ? spec.cells_per_axis[1] : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::array<double, 2> c{spec.box_lo[0] + (i + 0.5) * h,
                              spec.dim == 2 ? spec.box_lo[1] + (j + 0.5) * h : 0.0};
      if (dom.inside(c)) {
        dom.centers_.push_back(c);
        dom.grid_indices_.push_back({i, j});
      }
    }
  }
  if (dom.num_cells() < 2)
    throw std::invalid_argument("domain: fewer than 2 interior cells");
  return dom;
}

}  // namespace fplap
