#include "qsb/random.hpp"

#include <cmath>
#include <numbers>

namespace qsb {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n <= 1) return 0;
  // Smallest all-ones mask covering n - 1; reject draws >= n.
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  while (true) {
    const std::uint64_t x = engine_() & mask;
    if (x < n) return x;
  }
}

double Rng::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

ComplexMatrix gaussian_matrix(int rows, int cols, Rng& rng) {
  ComplexMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

}  // namespace

HermitianMatrix random_hermitian(int dim, Rng& rng) {
  return HermitianMatrix::symmetrized(gaussian_matrix(dim, dim, rng));
}

HermitianMatrix random_psd(int dim, int rank, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, rank, rng);
  return HermitianMatrix::symmetrized(g * g.adjoint());
}

DensityMatrix random_density(int dim, int rank, Rng& rng) {
  HermitianMatrix p = random_psd(dim, rank, rng);
  const double tr = p.trace();
  return DensityMatrix::trusted(p * (1.0 / tr));
}

HermitianMatrix random_rank1_projector(int dim, Rng& rng) {
  Eigen::VectorXcd v = gaussian_matrix(dim, 1, rng).col(0);
  v /= v.norm();
  return HermitianMatrix::symmetrized(v * v.adjoint());
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

}  // namespace qsb
