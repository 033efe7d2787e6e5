#include "qsb/errors.hpp"
#include "qsb/hermitian.hpp"
#include "qsb/portfolio.hpp"
#include "qsb/qsoftbayes.hpp"
#include "qsb/random.hpp"
#include "qsb/tomography.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <vector>

namespace py = pybind11;
using namespace qsb;

namespace {

HermitianMatrix herm(const ComplexMatrix& m) { return HermitianMatrix(m); }

DensityMatrix density(const ComplexMatrix& m) { return validate_density(m); }

std::vector<ObservationMatrix> observations(const std::vector<ComplexMatrix>& ms) {
  std::vector<ObservationMatrix> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.emplace_back(herm(m));
  return out;
}

std::vector<ComplexMatrix> matrices_of(const Dataset& d) {
  std::vector<ComplexMatrix> out;
  out.reserve(d.size());
  for (const auto& a : d.matrices()) out.push_back(a.matrix());
  return out;
}

}  // namespace

PYBIND11_MODULE(_qsoftbayes, m) {
  m.doc() = "Q-Soft-Bayes online learning and maximum-likelihood state tomography";
  m.attr("__version__") = QSB_VERSION;

  static py::exception<Error> base(m, "QsbError");
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  // Scalars.
  m.def("learning_rate", &learning_rate, py::arg("dim"), py::arg("rounds"));
  m.def("ops_regret_bound", &ops_regret_bound, py::arg("dim"), py::arg("rounds"));
  m.def("regret_bound_at", &regret_bound_at, py::arg("dim"), py::arg("t"), py::arg("eta"));
  m.def("eta_bar", &eta_bar, py::arg("eta"));

  // Matrix inequalities.
  m.def(
      "golden_thompson_gap",
      [](const ComplexMatrix& a, const ComplexMatrix& b) { return golden_thompson_gap(herm(a), herm(b)); },
      py::arg("a"), py::arg("b"));
  m.def(
      "quantum_relative_entropy",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma) {
        return quantum_relative_entropy(density(rho), density(sigma));
      },
      py::arg("rho"), py::arg("sigma"));
  m.def(
      "reverse_jensen_gap",
      [](const ComplexMatrix& x, const ComplexMatrix& rho, double eta) {
        return reverse_jensen_gap(ObservationMatrix(herm(x)), density(rho), eta);
      },
      py::arg("x"), py::arg("rho"), py::arg("eta"));

  // Portfolios.
  m.def(
      "soft_bayes_step",
      [](const RealVector& w, const RealVector& a, double eta) {
        return soft_bayes_step(Portfolio::validated(w), ReturnVector(a), eta).weights();
      },
      py::arg("w"), py::arg("a"), py::arg("eta"));
  m.def(
      "best_fixed_portfolio",
      [](const Eigen::MatrixXd& returns, double tol) {
        std::vector<ReturnVector> rs;
        rs.reserve(static_cast<std::size_t>(returns.rows()));
        for (Eigen::Index t = 0; t < returns.rows(); ++t) rs.emplace_back(returns.row(t).transpose());
        const auto res = best_fixed_portfolio(rs, tol);
        return py::make_tuple(res.portfolio.weights(), res.loss, res.gap);
      },
      py::arg("returns"), py::arg("tol") = 1e-8,
      "Returns (w*, cumulative loss, Frank-Wolfe gap) for a T x D return matrix.");

  // Online state.
  py::class_<QsbState>(m, "QsbState")
      .def(py::init([](int dim) { return qsb_init(dim); }), py::arg("dim"))
      .def(
          "step",
          [](const QsbState& s, const ComplexMatrix& a, double eta) {
            return qsb_step(s, ObservationMatrix(herm(a)), eta);
          },
          py::arg("a"), py::arg("eta"), "Returns the updated state.")
      .def_property_readonly("rho", [](const QsbState& s) { return s.rho().matrix(); })
      .def_property_readonly("log_weights", [](const QsbState& s) { return s.log_weights().matrix(); })
      .def_property_readonly("shift", &QsbState::shift)
      .def_property_readonly("round", &QsbState::round)
      .def_property_readonly("true_trace", &QsbState::true_trace)
      .def_property_readonly("log_true_trace", &QsbState::log_true_trace)
      .def_property_readonly("min_eigenvalue", &QsbState::min_eigenvalue);

  // Tomography.
  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const std::vector<ComplexMatrix>& ms) { return Dataset(observations(ms)); }),
           py::arg("matrices"))
      .def("__len__", &Dataset::size)
      .def_property_readonly("dim", &Dataset::dim)
      .def_property_readonly("matrices", &matrices_of)
      .def_property_readonly("provenance", [](const Dataset& d) {
        std::vector<std::pair<int, int>> out;
        for (const auto& p : d.provenance()) out.emplace_back(p.povm, p.outcome);
        return out;
      });

  m.def(
      "pauli_basis_povms",
      [](int qubits) {
        std::vector<std::vector<ComplexMatrix>> out;
        for (const auto& p : pauli_basis_povms(qubits)) {
          auto& el = out.emplace_back();
          for (const auto& e : p.elements()) el.push_back(e.matrix());
        }
        return out;
      },
      py::arg("qubits"));
  m.def(
      "generate_dataset",
      [](const ComplexMatrix& rho, const std::vector<std::vector<ComplexMatrix>>& povms, long shots,
         std::uint64_t seed) {
        std::vector<Povm> ps;
        for (const auto& p : povms) {
          std::vector<HermitianMatrix> el;
          for (const auto& e : p) el.push_back(herm(e));
          ps.emplace_back(std::move(el));
        }
        Rng rng(seed);
        return generate_dataset(density(rho), ps, shots, rng);
      },
      py::arg("rho"), py::arg("povms"), py::arg("shots"), py::arg("seed"));
  m.def(
      "ml_objective", [](const ComplexMatrix& rho, const Dataset& d) { return ml_objective(density(rho), d); },
      py::arg("rho"), py::arg("data"));

  py::class_<MlResult>(m, "MlResult")
      .def_property_readonly("rho_bar", [](const MlResult& r) { return r.rho_bar.matrix(); })
      .def_readonly("checkpoints", &MlResult::checkpoints)
      .def_readonly("objective_trace", &MlResult::objective_trace)
      .def_readonly("eta", &MlResult::eta)
      .def_readonly("rounds", &MlResult::rounds)
      .def_readonly("seed", &MlResult::seed);
  m.def("stochastic_qsb",
        [](const Dataset& d, long rounds, std::optional<double> eta, std::uint64_t seed,
           std::optional<std::vector<long>> checkpoints) {
          py::gil_scoped_release release;
          return stochastic_qsb(d, rounds, eta, seed, checkpoints);
        },
        py::arg("data"), py::arg("rounds"), py::arg("eta") = py::none(), py::arg("seed") = 0,
        py::arg("checkpoints") = py::none());

  py::class_<BatchMlResult>(m, "BatchMlResult")
      .def_property_readonly("rho", [](const BatchMlResult& r) { return r.rho.matrix(); })
      .def_readonly("value", &BatchMlResult::value)
      .def_readonly("gap", &BatchMlResult::gap)
      .def_readonly("iterations", &BatchMlResult::iterations);
  m.def(
      "batch_ml_solve",
      [](const Dataset& d, double tol) {
        py::gil_scoped_release release;
        return batch_ml_solve(d, tol);
      },
      py::arg("data"), py::arg("tol") = 1e-7);
}
