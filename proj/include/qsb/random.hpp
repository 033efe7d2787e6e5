#pragma once

// Seeded random numbers and random matrix ensembles.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. The distributions are implemented here rather than taken from
// <random> (whose algorithms are implementation defined), so a seed gives
// the same draws on every platform and can be reproduced from other
// languages:
//   uniform()       (x >> 11) * 2^-53
//   uniform_index() rejection sampling on the top bits
//   normal()        Box-Muller, both outputs used in order

#include "qsb/hermitian.hpp"

#include <cstdint>
#include <optional>
#include <random>

namespace qsb {

inline constexpr const char* kRngName = "mt19937_64/uniform53/box-muller";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform on {0, ..., n-1}; n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);
  double normal();
  // Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_normal();

  // Independent stream derived from this generator's seed material.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

// Ginibre-style ensembles used by generators and tests.
HermitianMatrix random_hermitian(int dim, Rng& rng);
// G G^H with G a dim x rank complex Gaussian matrix.
HermitianMatrix random_psd(int dim, int rank, Rng& rng);
// Normalized random_psd.
DensityMatrix random_density(int dim, int rank, Rng& rng);
// Haar-random unit vector as a rank-1 projector.
HermitianMatrix random_rank1_projector(int dim, Rng& rng);
// Haar-random unitary (QR of a complex Gaussian with phase fix).
ComplexMatrix random_unitary(int dim, Rng& rng);

}  // namespace qsb
