#pragma once

#include <array>
#include <string>
#include <vector>

namespace fplap {

/// Supported domain shapes. The disk is inscribed in its (square) bounding box.
enum class Shape { interval, rectangle, disk };

Shape shape_from_string(const std::string& name);
std::string to_string(Shape shape);

struct DomainSpec {
  Shape shape = Shape::interval;
  int dim = 1;
  std::array<double, 2> box_lo{0.0, 0.0};
  std::array<double, 2> box_hi{1.0, 1.0};
  std::array<int, 2> cells_per_axis{16, 1};

  static DomainSpec interval(double lo, double hi, int n);
  static DomainSpec rectangle(std::array<double, 2> lo, std::array<double, 2> hi,
                              std::array<int, 2> n);
  static DomainSpec disk(std::array<double, 2> lo, std::array<double, 2> hi,
                         std::array<int, 2> n);
};

/// Uniform Cartesian grid covering a bounded open set. A discrete function is
/// one value per interior cell, identified with its zero-extension outside.
/// Interior cells are enumerated in row-major order of the full box grid;
/// membership is decided by the cell center, partial cells are not clipped.
class Domain {
 public:
  int dim() const { return spec_.dim; }
  double spacing() const { return h_; }
  double cell_volume() const { return cell_volume_; }
  int num_cells() const { return static_cast<int>(centers_.size()); }
  const DomainSpec& spec() const { return spec_; }

  /// Center of interior cell i (length dim()).
  const std::array<double, 2>& center(int i) const { return centers_[i]; }
  const std::vector<std::array<double, 2>>& centers() const { return centers_; }

  /// Multi-index of interior cell i on the full box grid.
  const std::array<int, 2>& grid_index(int i) const { return grid_indices_[i]; }

  /// True if the point lies in the open set the grid discretizes.
  bool inside(const std::array<double, 2>& x) const;

  double diameter() const;

  friend Domain build_grid(const DomainSpec& spec);

 private:
  DomainSpec spec_;
  double h_ = 0.0;
  double cell_volume_ = 0.0;
  std::vector<std::array<double, 2>> centers_;
  std::vector<std::array<int, 2>> grid_indices_;
};

/// Builds the grid for a spec. Throws std::invalid_argument on degenerate
/// boxes, resolution < 2, axis spacings differing beyond 1e-12 relative, or
/// fewer than 2 interior cells.
Domain build_grid(const DomainSpec& spec);

}  // namespace fplap
