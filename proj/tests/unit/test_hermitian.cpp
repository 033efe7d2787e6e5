#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qsb/errors.hpp"
#include "qsb/hermitian.hpp"
#include "qsb/random.hpp"

#include <cmath>
#include <string>

using namespace qsb;

namespace {

ComplexMatrix cm(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

HermitianMatrix diag(std::initializer_list<double> v) {
  RealVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return HermitianMatrix::diagonal(d);
}

HermitianMatrix random_pd(int dim, Rng& rng) {
  return random_psd(dim, dim, rng) + HermitianMatrix::identity(dim) * 1e-3;
}

}  // namespace

TEST_CASE("HermitianMatrix validates and symmetrizes") {
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Zero(2, 3)), ValidationError);
  CHECK_THROWS_AS(HermitianMatrix(cm({{1, 2}, {0, 1}})), ValidationError);

  ComplexMatrix nearly = cm({{1, Complex(2, 1)}, {Complex(2, -1) + 1e-14, 3}});
  const HermitianMatrix h(nearly);
  CHECK(h.matrix() == h.matrix().adjoint());
}

TEST_CASE("eigh on hand-checked matrices") {
  const auto id = eigh(HermitianMatrix::identity(2));
  CHECK(id.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(id.eigenvalues(1) == doctest::Approx(1.0));

  const auto d = eigh(diag({3, -1}));
  CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(3.0));

  const auto x = eigh(HermitianMatrix(cm({{0, 1}, {1, 0}})));
  CHECK(x.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(x.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eigh reconstructs and returns a unitary, ascending basis") {
  Rng rng(11);
  for (int dim : {1, 2, 3, 4, 8, 16, 32}) {
    for (int rep = 0; rep < 10; ++rep) {
      const HermitianMatrix h = random_hermitian(dim, rng);
      const auto dec = eigh(h);
      const double err = (dec.reconstruct().matrix() - h.matrix()).norm();
      CHECK(err <= kDefaultTolerances.recon * h.frobenius_norm());
      const ComplexMatrix gram = dec.eigenvectors.adjoint() * dec.eigenvectors;
      CHECK((gram - ComplexMatrix::Identity(dim, dim)).norm() <= kDefaultTolerances.recon);
      for (int i = 1; i < dim; ++i) CHECK(dec.eigenvalues(i - 1) <= dec.eigenvalues(i));
    }
  }
}

TEST_CASE("eigh rejects non-finite input") {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 0) = std::nan("");
  CHECK_THROWS_AS(eigh(HermitianMatrix::symmetrized(m)), NumericalError);
}

TEST_CASE("matrix functions") {
  const auto half = HermitianMatrix::identity(2) * 0.5;
  const auto lg = matrix_log(half);
  CHECK((lg.matrix() - ComplexMatrix::Identity(2, 2) * -std::log(2.0)).norm() < 1e-15);

  const auto sq = matrix_sqrt(diag({1, 4}));
  CHECK((sq.matrix() - diag({1, 2}).matrix()).norm() < 1e-15);

  SUBCASE("log of a singular matrix is a domain error naming the eigenvalue") {
    try {
      matrix_log(diag({1, 0}));
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("eigenvalue 0") != std::string::npos);
    }
  }
  SUBCASE("sqrt of a negative eigenvalue is a domain error") {
    CHECK_THROWS_AS(matrix_sqrt(diag({1, -1})), DomainError);
  }
}

TEST_CASE("exp and log agree with the Schur-Pade oracle and invert each other") {
  Rng rng(5);
  for (int dim : {2, 4, 8}) {
    for (int rep = 0; rep < 20; ++rep) {
      const HermitianMatrix h = random_hermitian(dim, rng);
      const auto e = matrix_exp(h);
      CHECK((e.matrix() - oracle::expm(h.matrix())).norm() <= 1e-10 * e.frobenius_norm());
      CHECK(eigh(e).eigenvalues.minCoeff() > 0.0);

      const HermitianMatrix pd = random_pd(dim, rng);
      const auto l = matrix_log(pd);
      CHECK((l.matrix() - oracle::logm(pd.matrix())).norm() <= 1e-9 * std::max(1.0, l.frobenius_norm()));
      const auto back = matrix_exp(l);
      CHECK((back.matrix() - pd.matrix()).norm() <= kDefaultTolerances.recon * pd.frobenius_norm() * 10);
    }
  }
}

TEST_CASE("hs_inner") {
  Rng rng(3);
  const DensityMatrix rho = random_density(3, 3, rng);
  CHECK(hs_inner(HermitianMatrix::identity(3), rho.hermitian()) == doctest::Approx(1.0));
  CHECK(hs_inner(diag({1, 0}), diag({0, 1})) == 0.0);
  CHECK(hs_inner(diag({2, 3}), diag({5, 7})) == 31.0);
  CHECK_THROWS_AS(hs_inner(diag({1, 0}), HermitianMatrix::identity(3)), DimensionError);

  for (int rep = 0; rep < 50; ++rep) {
    const auto a = random_hermitian(5, rng);
    const auto b = random_hermitian(5, rng);
    CHECK(hs_inner(a, b) == hs_inner(b, a));
    CHECK(hs_inner(a, b) == doctest::Approx((a.matrix() * b.matrix()).trace().real()));
  }
}

TEST_CASE("quantum relative entropy") {
  Rng rng(17);
  SUBCASE("identical arguments") {
    for (int rep = 0; rep < 10; ++rep) {
      const auto rho = random_density(4, 1 + rep % 4, rng);
      CHECK(std::abs(quantum_relative_entropy(rho, rho)) < 1e-9);
    }
  }
  SUBCASE("pure state against maximally mixed") {
    const auto pure = validate_density(diag({1, 0}));
    CHECK(quantum_relative_entropy(pure, DensityMatrix::maximally_mixed(2)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("bounded by log D against the maximally mixed state") {
    for (int dim : {2, 4, 8}) {
      for (int rep = 0; rep < 100; ++rep) {
        const auto rho = random_density(dim, 1 + rep % dim, rng);
        const double s = quantum_relative_entropy(rho, DensityMatrix::maximally_mixed(dim));
        CHECK(s <= std::log(static_cast<double>(dim)) + kDefaultTolerances.ent);
        CHECK(s >= -kDefaultTolerances.ent);
      }
    }
  }
  SUBCASE("non-negative on random full-rank pairs") {
    for (int rep = 0; rep < 100; ++rep) {
      const auto rho = random_density(4, 1 + rep % 4, rng);
      const auto sigma = random_density(4, 4, rng);
      CHECK(quantum_relative_entropy(rho, sigma) >= -kDefaultTolerances.ent);
    }
  }
  SUBCASE("support violation") {
    const auto pure = validate_density(diag({1, 0}));
    CHECK_THROWS_AS(quantum_relative_entropy(DensityMatrix::maximally_mixed(2), pure), DomainError);
  }
}

TEST_CASE("validate_density") {
  CHECK_NOTHROW(validate_density(HermitianMatrix::identity(4) * 0.25));
  try {
    validate_density(diag({0.6, 0.6}));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("trace is 1.2") != std::string::npos);
  }
  try {
    validate_density(diag({1.5, -0.5}));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("not positive semi-definite") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_density(cm({{0.5, 1}, {0, 0.5}})), ValidationError);
}

TEST_CASE("Golden-Thompson gap") {
  CHECK(golden_thompson_gap(diag({1, -2}), diag({0.5, 3})) == doctest::Approx(0.0).epsilon(1e-12));
  Rng rng(23);
  const auto a = random_hermitian(3, rng);
  CHECK(std::abs(golden_thompson_gap(a, a)) < 1e-12 * matrix_exp(a * 2.0).trace());
  for (int dim : {2, 4, 8}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto x = random_hermitian(dim, rng);
      const auto y = random_hermitian(dim, rng);
      CHECK(golden_thompson_gap(x, y) >= -1e-9);
    }
  }
  CHECK_THROWS_AS(golden_thompson_gap(HermitianMatrix::identity(2), HermitianMatrix::identity(3)),
                  DimensionError);
}
