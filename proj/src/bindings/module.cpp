#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fplap/eigensolvers.hpp"
#include "fplap/inequalities.hpp"

namespace py = pybind11;
using namespace fplap;

namespace {

Eigen::MatrixXd path_matrix(const SymmetricPath& path) {
  if (path.points.empty()) return {};
  Eigen::MatrixXd m(static_cast<long>(path.points.size()), path.points[0].size());
  for (std::size_t k = 0; k < path.points.size(); ++k)
    m.row(static_cast<long>(k)) = path.points[k];
  return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "eigenvalues of the weighted fractional p-Laplacian on uniform grids";

  py::class_<Domain>(m, "Domain")
      .def_property_readonly("dim", &Domain::dim)
      .def_property_readonly("spacing", &Domain::spacing)
      .def_property_readonly("cell_volume", &Domain::cell_volume)
      .def_property_readonly("num_cells", &Domain::num_cells)
      .def_property_readonly("centers",
                             [](const Domain& d) {
                               Eigen::MatrixXd c(d.num_cells(), d.dim());
                               for (int i = 0; i < d.num_cells(); ++i)
                                 for (int a = 0; a < d.dim(); ++a)
                                   c(i, a) = d.center(i)[a];
                               return c;
                             })
      .def("__repr__", [](const Domain& d) {
        return "<Domain dim=" + std::to_string(d.dim()) +
               " cells=" + std::to_string(d.num_cells()) + ">";
      });

  m.def("build_interval",
        [](double lo, double hi, int n) {
          return build_grid(DomainSpec::interval(lo, hi, n));
        },
        py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def("build_rectangle",
        [](std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> n) {
          return build_grid(DomainSpec::rectangle(lo, hi, n));
        },
        py::arg("lo"), py::arg("hi"), py::arg("n"));
  m.def("build_disk",
        [](std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> n) {
          return build_grid(DomainSpec::disk(lo, hi, n));
        },
        py::arg("lo"), py::arg("hi"), py::arg("n"));

  py::class_<FractionalKernel>(m, "FractionalKernel")
      .def_readonly("s", &FractionalKernel::s)
      .def_readonly("p", &FractionalKernel::p)
      .def_readonly("exponent", &FractionalKernel::exponent)
      .def_readonly("dim", &FractionalKernel::dim)
      .def_readonly("cell_volume", &FractionalKernel::cell_volume)
      .def_readonly("pair_weights", &FractionalKernel::pair_weights)
      .def_readonly("exterior_coeff", &FractionalKernel::exterior_coeff)
      .def_property_readonly("num_cells", &FractionalKernel::num_cells);

  m.def("assemble_kernel", &assemble_kernel, py::arg("domain"), py::arg("s"),
        py::arg("p"));
  m.def("exterior_tail", &exterior_tail, py::arg("domain"), py::arg("s"),
        py::arg("p"), py::arg("cell_index"));

  py::class_<WeightField>(m, "WeightField")
      .def_readonly("values", &WeightField::values)
      .def_readonly("cell_volume", &WeightField::cell_volume)
      .def_readonly("positive_mass", &WeightField::positive_mass);

  m.def("weight_constant", &WeightField::constant, py::arg("domain"),
        py::arg("value"));
  m.def("weight_step", &WeightField::step, py::arg("domain"), py::arg("axis"),
        py::arg("threshold"), py::arg("value_below"), py::arg("value_above"));
  m.def("weight_singular", &WeightField::singular, py::arg("domain"), py::arg("c"),
        py::arg("x0"), py::arg("alpha"), py::arg("offset"), py::arg("p"),
        py::arg("s"));
  m.def("weight_from_values", &WeightField::from_values, py::arg("domain"),
        py::arg("values"));

  m.def("gagliardo_energy", &gagliardo_energy, py::arg("kernel"), py::arg("p"),
        py::arg("u"));
  m.def("gagliardo_gradient", &gagliardo_gradient, py::arg("kernel"), py::arg("p"),
        py::arg("u"));
  m.def("weighted_lp_energy", &weighted_lp_energy, py::arg("weight"), py::arg("p"),
        py::arg("u"));
  m.def("weighted_lp_gradient", &weighted_lp_gradient, py::arg("weight"),
        py::arg("p"), py::arg("u"));
  m.def("residual_norm", &residual_norm, py::arg("kernel"), py::arg("weight"),
        py::arg("p"), py::arg("lambda_"), py::arg("u"));
  m.def("normalize_to_sphere", &normalize_to_sphere, py::arg("u"), py::arg("weight"),
        py::arg("p"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("tol_residual", &SolverConfig::tol_residual)
      .def_readwrite("max_iter", &SolverConfig::max_iter)
      .def_readwrite("step_init", &SolverConfig::step_init)
      .def_readwrite("armijo_factor", &SolverConfig::armijo_factor)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("path_points", &SolverConfig::path_points)
      .def_readwrite("lse_temperatures", &SolverConfig::lse_temperatures)
      .def_readwrite("omega_samples", &SolverConfig::omega_samples);

  py::class_<EigenPair>(m, "EigenPair")
      .def_readonly("lambda_", &EigenPair::lambda)
      .def_readonly("u", &EigenPair::u)
      .def_readonly("residual", &EigenPair::residual)
      .def_readonly("iterations", &EigenPair::iterations)
      .def_readonly("converged", &EigenPair::converged)
      .def("__repr__", [](const EigenPair& e) {
        return "<EigenPair lambda=" + std::to_string(e.lambda) +
               " converged=" + (e.converged ? std::string("True") : "False") + ">";
      });

  py::class_<PathMinimaxResult>(m, "PathResult")
      .def_readonly("estimate", &PathMinimaxResult::estimate)
      .def_readonly("max_point", &PathMinimaxResult::max_point)
      .def_readonly("residual", &PathMinimaxResult::residual)
      .def_readonly("iterations", &PathMinimaxResult::iterations)
      .def_readonly("converged", &PathMinimaxResult::converged)
      .def_property_readonly(
          "path", [](const PathMinimaxResult& r) { return path_matrix(r.path); })
      .def_property_readonly(
          "path_energies",
          [](const PathMinimaxResult& r) { return r.path.energies; });

  py::class_<SimplicityReport>(m, "SimplicityReport")
      .def_readonly("lambdas", &SimplicityReport::lambdas)
      .def_readonly("lambda_spread", &SimplicityReport::lambda_spread)
      .def_readonly("max_eigenfunction_distance",
                    &SimplicityReport::max_eigenfunction_distance);

  m.def("solve_lambda1", &solve_lambda1, py::arg("kernel"), py::arg("weight"),
        py::arg("p"), py::arg("config") = SolverConfig{});
  m.def("solve_lambda2_path", &solve_lambda2_path, py::arg("kernel"),
        py::arg("weight"), py::arg("p"), py::arg("e1"),
        py::arg("config") = SolverConfig{});
  m.def("lambda2_upper_from_nodal", &lambda2_upper_from_nodal, py::arg("kernel"),
        py::arg("weight"), py::arg("p"), py::arg("u_nodal"),
        py::arg("omega_samples") = 1024);
  m.def("p2_oracle_spectrum",
        [](const FractionalKernel& kernel, const WeightField& weight, int count) {
          OracleSpectrum spec = p2_oracle_spectrum(kernel, weight, count);
          py::list out;
          for (auto& pair : spec.pairs) out.append(std::move(pair));
          return py::make_tuple(out, spec.truncated);
        },
        py::arg("kernel"), py::arg("weight"), py::arg("count"));
  m.def("check_simplicity", &check_simplicity, py::arg("kernel"), py::arg("weight"),
        py::arg("p"), py::arg("config"), py::arg("trials"));
  m.def("compute_monotonicity_constant", &compute_monotonicity_constant,
        py::arg("kernel"), py::arg("m"), py::arg("m_tilde"), py::arg("p"),
        py::arg("lambda_cap"), py::arg("config") = SolverConfig{});

  m.def("convexity_gap",
        [](double a, double b, double p) { return convexity_gap(a, b, p).gap; });
  m.def("lagrange_gap",
        [](double a, double b, double q) { return lagrange_gap(a, b, q).gap; });
  m.def("picone_gap", [](double ax, double ay, double bx, double by, double p,
                         double eps) { return picone_gap(ax, ay, bx, by, p, eps).gap; });
  m.def("scd5_gap", [](double U, double V, double w1, double w2, double p) {
    return scd5_gap(U, V, w1, w2, p).gap;
  });
  m.def("hidden_convexity_gap",
        [](const FractionalKernel& kernel, double p, const GridFunction& u,
           const GridFunction& v, double t) {
          return hidden_convexity_gap(kernel, p, u, v, t).gap;
        });
}
