#include "fplap/energy.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fplap {

namespace {

WeightField finish(Eigen::VectorXd values, double cell_volume) {
  WeightField w;
  if (!values.allFinite())
    throw std::invalid_argument("weight: values must be finite");
  w.positive_mass = values.cwiseMax(0.0).sum() * cell_volume;
  if (!(w.positive_mass > 0.0))
    throw std::invalid_argument("weight: positive part must have positive mass");
  w.values = std::move(values);
  w.cell_volume = cell_volume;
  return w;
}

}  // namespace

WeightField WeightField::constant(const Domain& domain, double value) {
  return finish(Eigen::VectorXd::Constant(domain.num_cells(), value),
                domain.cell_volume());
}

WeightField WeightField::step(const Domain& domain, int axis, double threshold,
                              double value_below, double value_above) {
  if (axis < 0 || axis >= domain.dim())
    throw std::invalid_argument("weight: step axis out of range");
  Eigen::VectorXd v(domain.num_cells());
  for (int i = 0; i < domain.num_cells(); ++i)
    v(i) = domain.center(i)[axis] < threshold ? value_below : value_above;
  return finish(std::move(v), domain.cell_volume());
}

WeightField WeightField::singular(const Domain& domain, double c,
                                  std::array<double, 2> x0, double alpha,
                                  double offset, double p, double s) {
  if (!(alpha < p * s))
    throw std::invalid_argument(
        "weight: singular exponent must satisfy alpha < p*s (integrability of the "
        "weight class)");
  if (!(alpha > 0.0)) throw std::invalid_argument("weight: alpha must be > 0");
  Eigen::VectorXd v(domain.num_cells());
  for (int i = 0; i < domain.num_cells(); ++i) {
    const auto& x = domain.center(i);
    double d2 = 0.0;
    for (int a = 0; a < domain.dim(); ++a) d2 += (x[a] - x0[a]) * (x[a] - x0[a]);
    const double d = std::sqrt(d2);
    if (d == 0.0)
      throw std::invalid_argument("weight: singularity coincides with a cell center");
    v(i) = c * std::pow(d, -alpha) + offset;
  }
  return finish(std::move(v), domain.cell_volume());
}

WeightField WeightField::from_values(const Domain& domain, Eigen::VectorXd values) {
  if (values.size() != domain.num_cells())
    throw std::invalid_argument("weight: value count does not match the grid");
  return finish(std::move(values), domain.cell_volume());
}

WeightField WeightField::from_raw(Eigen::VectorXd values, double cell_volume) {
  if (!(cell_volume > 0.0))
    throw std::invalid_argument("weight: cell volume must be positive");
  return finish(std::move(values), cell_volume);
}

WeightField WeightField::from_csv(const Domain& domain, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("weight: cannot open " + path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // last field of the row; tolerate RFC-4180 quoting on leading fields
    std::size_t pos = line.rfind(',');
    std::string field = (pos == std::string::npos) ? line : line.substr(pos + 1);
    if (!field.empty() && field.front() == '"' && field.back() == '"')
      field = field.substr(1, field.size() - 2);
    try {
      vals.push_back(std::stod(field));
    } catch (const std::exception&) {
      if (vals.empty()) continue;  // header row
      throw std::invalid_argument("weight: bad CSV value '" + field + "' in " + path);
    }
  }
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(),
                                                  static_cast<long>(vals.size()));
  return from_values(domain, std::move(v));
}

double gagliardo_energy(const FractionalKernel& kernel, double p,
                        const GridFunction& u) {
  const int n = kernel.num_cells();
  if (u.size() != n) throw std::invalid_argument("energy: size mismatch");
  double pair_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ui = u(i);
    for (int j = i + 1; j < n; ++j)
      pair_sum += kernel.pair_weights(i, j) * detail::pow_abs(ui - u(j), p);
  }
  double tail = 0.0;
  for (int i = 0; i < n; ++i)
    tail += kernel.exterior_coeff(i) * detail::pow_abs(u(i), p);
  return 2.0 * pair_sum + tail * kernel.cell_volume;
}

GridFunction gagliardo_gradient(const FractionalKernel& kernel, double p,
                                const GridFunction& u) {
  const int n = kernel.num_cells();
  if (u.size() != n) throw std::invalid_argument("energy: size mismatch");
  GridFunction g = GridFunction::Zero(n);
  const double e = p - 1.0;
  for (int i = 0; i < n; ++i) {
    const double ui = u(i);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += kernel.pair_weights(i, j) * detail::signed_pow(ui - u(j), e);
    }
    g(i) = 2.0 * p * acc +
           p * kernel.exterior_coeff(i) * detail::signed_pow(ui, e) * kernel.cell_volume;
  }
  return g;
}

double weighted_lp_energy(const WeightField& weight, double p, const GridFunction& u) {
  if (u.size() != weight.size()) throw std::invalid_argument("energy: size mismatch");
  double acc = 0.0;
  for (int i = 0; i < weight.size(); ++i)
    acc += weight.values(i) * detail::pow_abs(u(i), p);
  return acc * weight.cell_volume;
}

GridFunction weighted_lp_gradient(const WeightField& weight, double p,
                                  const GridFunction& u) {
  if (u.size() != weight.size()) throw std::invalid_argument("energy: size mismatch");
  GridFunction g(weight.size());
  const double e = p - 1.0;
  for (int i = 0; i < weight.size(); ++i)
    g(i) = p * weight.values(i) * detail::signed_pow(u(i), e) * weight.cell_volume;
  return g;
}

double residual_norm(const FractionalKernel& kernel, const WeightField& weight,
                     double p, double lambda, const GridFunction& u) {
  if (u.size() == 0 || u.isZero(0.0))
    throw std::invalid_argument("residual_norm: u must be nonzero");
  const GridFunction gphi = gagliardo_gradient(kernel, p, u);
  const GridFunction gpsi = weighted_lp_gradient(weight, p, u);
  const double denom = gphi.norm();
  if (denom == 0.0) throw std::runtime_error("residual_norm: zero energy gradient");
  return (gphi - lambda * gpsi).norm() / denom;
}

}  // namespace fplap
