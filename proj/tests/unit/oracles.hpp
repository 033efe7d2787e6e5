#pragma once

// Test-only reference computations that do not go through the library's
// spectral routines: Eigen's Schur/Pade matrix exp and log, and a direct
// (no log-domain accumulator, no shift) evaluation of the Q-Soft-Bayes
// update.

#include "qsb/hermitian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <vector>

namespace oracle {

inline qsb::ComplexMatrix expm(const qsb::ComplexMatrix& m) { return m.exp(); }
inline qsb::ComplexMatrix logm(const qsb::ComplexMatrix& m) { return m.log(); }

// W_{t+1} = exp(log W_t + log((1 - eta) I + eta A / tr(A rho_t))),
// rho_{t+1} = W_{t+1} / tr(W_{t+1}), starting from W_1 = I / D.
struct DirectQsb {
  qsb::ComplexMatrix w;

  explicit DirectQsb(int dim) : w(qsb::ComplexMatrix::Identity(dim, dim) / double(dim)) {}

  qsb::ComplexMatrix rho() const { return w / w.trace().real(); }
  double trace() const { return w.trace().real(); }

  void step(const qsb::ComplexMatrix& a, double eta) {
    const auto dim = w.rows();
    const qsb::ComplexMatrix r = rho();
    const double p = (a * r).trace().real();
    const qsb::ComplexMatrix g =
        (1.0 - eta) * qsb::ComplexMatrix::Identity(dim, dim) + (eta / p) * a;
    qsb::ComplexMatrix next = expm(logm(w) + logm(g));
    w = 0.5 * (next + next.adjoint());
  }
};

// Classical Soft-Bayes written out coordinate by coordinate.
inline std::vector<double> soft_bayes_direct(const std::vector<double>& w,
                                             const std::vector<double>& a, double eta) {
  double inner = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) inner += a[i] * w[i];
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    out[i] = (1.0 - eta) * w[i] + eta * a[i] * w[i] / inner;
  }
  return out;
}

}  // namespace oracle
