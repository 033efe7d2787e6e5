#include "qsb/hermitian.hpp"

#include "qsb/errors.hpp"

#include <cmath>
#include <sstream>

namespace qsb {

namespace {

ComplexMatrix symmetrize(const ComplexMatrix& m) {
  ComplexMatrix out = 0.5 * (m + m.adjoint());
  // Diagonal of a Hermitian matrix is real.
  for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, i) = out(i, i).real();
  return out;
}

void require_same_dim(const HermitianMatrix& a, const HermitianMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw DimensionError(msg.str());
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double sym_tol) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "matrix is not square (" << m.rows() << "x" << m.cols() << ")";
    throw ValidationError(msg.str());
  }
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
  const double defect = (m - m.adjoint()).norm();
  const double scale = std::max(1.0, m.norm());
  if (defect > sym_tol * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: ||M - M^H||_F = " << defect
        << " exceeds " << sym_tol << " * " << scale;
    throw ValidationError(msg.str());
  }
  m_ = symmetrize(m);
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  HermitianMatrix h;
  h.m_ = symmetrize(m);
  return h;
}

HermitianMatrix HermitianMatrix::identity(int dim) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Identity(dim, dim);
  return h;
}

HermitianMatrix HermitianMatrix::zero(int dim) {
  HermitianMatrix h;
  h.m_ = ComplexMatrix::Zero(dim, dim);
  return h;
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& diag) {
  HermitianMatrix h;
  h.m_ = diag.cast<Complex>().asDiagonal();
  return h;
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  require_same_dim(*this, other, "operator+");
  m_ += other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  require_same_dim(*this, other, "operator-");
  m_ -= other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(HermitianMatrix::identity(dim) * (1.0 / dim));
}

HermitianMatrix SpectralDecomposition::apply(const std::function<double(double)>& f) const {
  const Eigen::Index n = eigenvalues.size();
  RealVector values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    values(i) = f(eigenvalues(i));
    if (!std::isfinite(values(i))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "matrix function undefined at eigenvalue " << eigenvalues(i);
      throw DomainError(msg.str());
    }
  }
  return HermitianMatrix::symmetrized(eigenvectors * values.cast<Complex>().asDiagonal() *
                                      eigenvectors.adjoint());
}

HermitianMatrix SpectralDecomposition::reconstruct() const {
  return HermitianMatrix::symmetrized(eigenvectors * eigenvalues.cast<Complex>().asDiagonal() *
                                      eigenvectors.adjoint());
}

SpectralDecomposition eigh(const HermitianMatrix& h) {
  if (!h.matrix().allFinite()) throw NumericalError("eigh: non-finite input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigh: eigenvalue decomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianMatrix matrix_fn(const HermitianMatrix& h, const std::function<double(double)>& f) {
  return eigh(h).apply(f);
}

HermitianMatrix matrix_log(const HermitianMatrix& h, const Tolerances& tol) {
  const auto spec = eigh(h);
  const double smallest = spec.eigenvalues.size() ? spec.eigenvalues(0) : 1.0;
  if (smallest <= tol.eval_floor) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "matrix_log: eigenvalue " << smallest << " is not above the floor " << tol.eval_floor;
    throw DomainError(msg.str());
  }
  return spec.apply([](double x) { return std::log(x); });
}

HermitianMatrix matrix_exp(const HermitianMatrix& h) {
  return matrix_fn(h, [](double x) { return std::exp(x); });
}

HermitianMatrix matrix_sqrt(const HermitianMatrix& h) {
  return matrix_fn(h, [](double x) { return std::sqrt(x); });
}

double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "hs_inner");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij); the real part is a
  // sum of products symmetric in (A, B).
  const ComplexMatrix& x = a.matrix();
  const ComplexMatrix& y = b.matrix();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      acc += x(i, j).real() * y(i, j).real() + x(i, j).imag() * y(i, j).imag();
    }
  }
  return acc;
}

double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                const Tolerances& tol) {
  require_same_dim(rho.hermitian(), sigma.hermitian(), "quantum_relative_entropy");
  const auto rs = eigh(rho.hermitian());
  const auto ss = eigh(sigma.hermitian());

  double self = 0.0;
  for (Eigen::Index i = 0; i < rs.eigenvalues.size(); ++i) {
    const double p = rs.eigenvalues(i);
    if (p > tol.eval_floor) self += p * std::log(p);
  }

  // <log sigma, rho> = sum_j log(s_j) <v_j|rho|v_j>
  const ComplexMatrix weights_m = ss.eigenvectors.adjoint() * rho.matrix() * ss.eigenvectors;
  double cross = 0.0;
  for (Eigen::Index j = 0; j < ss.eigenvalues.size(); ++j) {
    const double s = ss.eigenvalues(j);
    const double w = weights_m(j, j).real();
    if (s <= tol.eval_floor) {
      if (w > tol.psd) {
        std::ostringstream msg;
        msg << "quantum_relative_entropy: rho has weight " << w
            << " outside the support of sigma";
        throw DomainError(msg.str());
      }
      continue;
    }
    cross += w * std::log(s);
  }
  return self - cross;
}

DensityMatrix validate_density(const HermitianMatrix& h, const Tolerances& tol) {
  const auto spec = eigh(h);
  const double smallest = spec.eigenvalues.size() ? spec.eigenvalues(0) : 0.0;
  if (smallest < -tol.psd) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "not positive semi-definite: smallest eigenvalue " << smallest
        << " is below -" << tol.psd;
    throw ValidationError(msg.str());
  }
  const double tr = h.trace();
  if (std::abs(tr - 1.0) > tol.trace) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trace is " << tr << ", off by " << std::abs(tr - 1.0) << " (tolerance "
        << tol.trace << ")";
    throw ValidationError(msg.str());
  }
  return DensityMatrix::trusted(h);
}

DensityMatrix validate_density(const ComplexMatrix& m, const Tolerances& tol) {
  return validate_density(HermitianMatrix(m, tol.sym), tol);
}

double golden_thompson_gap(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a, b, "golden_thompson_gap");
  return hs_inner(matrix_exp(a), matrix_exp(b)) - matrix_exp(a + b).trace();
}

}  // namespace qsb
