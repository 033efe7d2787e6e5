#pragma once

// Dense Hermitian linear algebra: spectral decomposition, matrix functions,
// Hilbert-Schmidt inner product, quantum relative entropy and validation of
// density matrices. Every matrix-producing routine returns an exactly
// Hermitian value ((M + M^H) / 2 is applied before returning).

#include <Eigen/Dense>

#include <complex>
#include <functional>

namespace qsb {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct Tolerances {
  double sym = 1e-12;     // relative Hermiticity defect
  double psd = 1e-10;     // most negative eigenvalue accepted as PSD
  double trace = 1e-9;    // |tr - 1| for density matrices / simplex sums
  double recon = 1e-10;   // relative reconstruction error of eigh
  double ent = 1e-9;      // slack for entropy-type inequalities
  double eval_floor = 1e-300;  // eigenvalues below are treated as zero
};

inline constexpr Tolerances kDefaultTolerances{};

class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // Throws ValidationError if m is not square or not Hermitian within
  // sym_tol relative to its Frobenius norm; stores the symmetrized matrix.
  explicit HermitianMatrix(const ComplexMatrix& m,
                           double sym_tol = kDefaultTolerances.sym);

  // Symmetrizes without checking; for results known to be Hermitian up to
  // rounding.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);

  static HermitianMatrix identity(int dim);
  static HermitianMatrix zero(int dim);
  static HermitianMatrix diagonal(const RealVector& diag);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.diagonal().real().sum(); }
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) {
    return a += b;
  }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) {
    return a -= b;
  }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }

 private:
  ComplexMatrix m_;
};

// Unit-trace PSD Hermitian matrix. Obtain one through validate_density(),
// maximally_mixed() or trusted() for values an algorithm produced by
// construction.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  static DensityMatrix maximally_mixed(int dim);
  // No validation; the caller guarantees the invariants.
  static DensityMatrix trusted(HermitianMatrix h) { return DensityMatrix(std::move(h)); }

  const HermitianMatrix& hermitian() const { return base_; }
  const ComplexMatrix& matrix() const { return base_.matrix(); }
  int dim() const { return base_.dim(); }

 private:
  explicit DensityMatrix(HermitianMatrix h) : base_(std::move(h)) {}
  HermitianMatrix base_;
};

struct SpectralDecomposition {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // unitary, columns

  // U diag(f(lambda)) U^H, symmetrized. Throws DomainError if f yields a
  // non-finite value.
  HermitianMatrix apply(const std::function<double(double)>& f) const;
  HermitianMatrix reconstruct() const;
};

SpectralDecomposition eigh(const HermitianMatrix& h);

HermitianMatrix matrix_fn(const HermitianMatrix& h,
                          const std::function<double(double)>& f);

// Matrix logarithm; every eigenvalue must exceed tol.eval_floor.
HermitianMatrix matrix_log(const HermitianMatrix& h,
                           const Tolerances& tol = kDefaultTolerances);
HermitianMatrix matrix_exp(const HermitianMatrix& h);
HermitianMatrix matrix_sqrt(const HermitianMatrix& h);

// tr(AB) for Hermitian A, B, i.e. sum_ij Re(A_ij conj(B_ij)). Exactly
// symmetric in its arguments.
double hs_inner(const HermitianMatrix& a, const HermitianMatrix& b);

// S(rho || sigma) = <log rho - log sigma, rho> with 0 log 0 = 0. Throws
// DomainError when rho has weight on the kernel of sigma.
double quantum_relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                                const Tolerances& tol = kDefaultTolerances);

// Checks Hermiticity, eigenvalues >= -tol.psd and |tr - 1| <= tol.trace.
// Throws ValidationError describing the failed invariant and its size.
DensityMatrix validate_density(const HermitianMatrix& h,
                               const Tolerances& tol = kDefaultTolerances);
DensityMatrix validate_density(const ComplexMatrix& m,
                               const Tolerances& tol = kDefaultTolerances);

// tr(exp(A) exp(B)) - tr(exp(A + B)); non-negative by Golden-Thompson.
double golden_thompson_gap(const HermitianMatrix& a, const HermitianMatrix& b);

}  // namespace qsb
