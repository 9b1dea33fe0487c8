#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmf/experiments.hpp"

#include <json.hpp>

namespace py = pybind11;
using namespace qmf;

namespace {

FieldDistribution dist_from_json_str(const std::string& text) {
    return FieldDistribution::from_json(nlohmann::json::parse(text));
}

Eigen::MatrixXd fields_matrix(const FieldRealization& r) {
    Eigen::MatrixXd out(r.n_sites, 3);
    for (int i = 0; i < r.n_sites; ++i) out.row(i) = r.fields[static_cast<size_t>(i)];
    return out;
}

LambdaEvaluator make_evaluator(const FieldDistribution& dist, bool annealed) {
    return LambdaEvaluator::make(dist, annealed);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact finite-N thermodynamics of quantum mean-field spin models "
              "in random external fields";

    py::class_<PolynomialSymbol>(m, "PolynomialSymbol")
        .def_static("parse", &PolynomialSymbol::parse, py::arg("text"))
        .def("degree", &PolynomialSymbol::degree)
        .def("__call__",
             [](const PolynomialSymbol& p, const Vec3& x) { return p(x); })
        .def("eval_checked", &symbol_eval)
        .def("__repr__", [](const PolynomialSymbol& p) {
            return "PolynomialSymbol(\"" + p.to_string() + "\")";
        });

    py::class_<FieldDistribution>(m, "FieldDistribution")
        .def_static("from_json", &dist_from_json_str, py::arg("text"))
        .def("mean_field_vector", &FieldDistribution::mean_field_vector)
        .def("__repr__", [](const FieldDistribution& d) {
            return "FieldDistribution(" + d.describe() + ")";
        });

    py::class_<LambdaEvaluator>(m, "LambdaEvaluator")
        .def_static("make", &make_evaluator, py::arg("distribution"),
                    py::arg("annealed") = false)
        .def("value", &LambdaEvaluator::value, py::arg("h"))
        .def("gradient", &LambdaEvaluator::gradient, py::arg("h"))
        .def("legendre",
             [](const LambdaEvaluator& ev, const Vec3& mvec) {
                 const LegendreSolution s = legendre_transform(ev, mvec);
                 return py::make_tuple(s.lambda_star, s.h, s.residual, s.converged);
             },
             py::arg("m"), "returns (lambda_star, h, residual, converged)");

    m.def("sample_fields",
          [](const FieldDistribution& d, int n, std::uint64_t seed) {
              return fields_matrix(sample_fields(d, n, seed));
          },
          py::arg("distribution"), py::arg("n_sites"), py::arg("seed"));
    m.def("bbar",
          [](const FieldDistribution& d, int n, std::uint64_t seed) {
              return bbar(sample_fields(d, n, seed));
          },
          py::arg("distribution"), py::arg("n_sites"), py::arg("seed"));

    m.def("weyl_ordered_operator", &weyl_ordered_operator, py::arg("symbol"),
          py::arg("n_sites"));
    m.def("assemble_full",
          [](const PolynomialSymbol& p, const FieldDistribution& d, int n,
             std::uint64_t seed) {
              return assemble_full(p, sample_fields(d, n, seed)).matrix;
          },
          py::arg("symbol"), py::arg("distribution"), py::arg("n_sites"), py::arg("seed"));
    m.def("block_degeneracy",
          [](int n, double j) { return block_degeneracy(n, int(std::lround(2 * j))); },
          py::arg("n_sites"), py::arg("j"));

    m.def("pressure",
          [](const Operator& h, int n) { return pressure(h, n); }, py::arg("h"),
          py::arg("n_sites"));
    m.def("diagonalize",
          [](const Operator& h) {
              const SpectralData sd = diagonalize(h);
              return py::make_tuple(sd.eigenvalues, sd.eigenvectors);
          },
          py::arg("h"), "returns (eigenvalues, eigenvectors)");
    m.def("gibbs_average",
          [](const Operator& h, const Operator& a) {
              return gibbs_average(diagonalize(h), a);
          },
          py::arg("h"), py::arg("a"));
    m.def("thermal_variance",
          [](const Operator& h, const Operator& a) {
              return thermal_variance(diagonalize(h), a);
          },
          py::arg("h"), py::arg("a"));
    m.def("bogoliubov_gap", &bogoliubov_gap, py::arg("h"), py::arg("a"),
          py::arg("n_sites"));

    m.def("binary_entropy", &binary_entropy, py::arg("r"));
    m.def("deterministic_pressure",
          [](const PolynomialSymbol& v) {
              const VariationalResult r = deterministic_pressure(v);
              return py::make_tuple(r.pressure, r.maximizer);
          },
          py::arg("symbol"), "returns (pressure, maximizer)");
    m.def("variational_pressure",
          [](const PolynomialSymbol& v, const FieldDistribution& d, bool annealed) {
              const VariationalResult r =
                  variational_pressure(v, LambdaEvaluator::make(d, annealed));
              return py::make_tuple(r.pressure, r.maximizer);
          },
          py::arg("symbol"), py::arg("distribution"), py::arg("annealed") = false,
          "returns (pressure, maximizer)");
    m.def("quadratic_inf_pressure",
          [](const Vec3& alpha, const FieldDistribution& d) {
              const QuadraticDuality q =
                  quadratic_inf_pressure(alpha, LambdaEvaluator::make(d));
              return py::make_tuple(q.inf_form, q.dual_form);
          },
          py::arg("alpha"), py::arg("distribution"), "returns (inf_form, dual_form)");
    m.def("micro_gap", &micro_gap, py::arg("symbol"), py::arg("alpha"));
    m.def("duffield_error", &duffield_error, py::arg("symbol"), py::arg("n_sites"));
    m.def("berezin_bounds",
          [](const PolynomialSymbol& p, double j, int n) {
              const int two_j = int(std::lround(2 * j));
              const SphereQuadrature q =
                  SphereQuadrature::for_degree(2 * two_j + p.degree() + 4);
              const auto f = [&](const Vec3& mv) { return p(mv); };
              const Operator g = upper_symbol_operator(f, two_j, n, q);
              const double radius = double(two_j) / n;
              const BerezinBounds b = berezin_lieb_bounds(
                  g,
                  [&](double theta, double phi) {
                      return n * p(radius * sphere_direction(theta, phi));
                  },
                  two_j, q);
              return py::make_tuple(b.lower, b.exact, b.upper);
          },
          py::arg("symbol"), py::arg("j"), py::arg("n_sites"),
          "returns (lower, exact, upper)");
    m.def("gibbs_trial_bound",
          [](const PolynomialSymbol& p, const FieldDistribution& d, int n,
             std::uint64_t seed, const Vec3& h) {
              return gibbs_trial_bound(p, sample_fields(d, n, seed), h);
          },
          py::arg("symbol"), py::arg("distribution"), py::arg("n_sites"), py::arg("seed"),
          py::arg("h"));
}
