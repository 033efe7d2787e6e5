#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "qsb/errors.hpp"
#include "qsb/portfolio.hpp"
#include "qsb/qsoftbayes.hpp"
#include "qsb/random.hpp"

#include <cmath>
#include <vector>

using namespace qsb;

namespace {

HermitianMatrix diag(const RealVector& v) { return HermitianMatrix::diagonal(v); }

RealVector vec(std::initializer_list<double> v) {
  RealVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::vector<ObservationMatrix> psd_stream(int dim, int n, Rng& rng) {
  std::vector<ObservationMatrix> out;
  for (int t = 0; t < n; ++t) out.emplace_back(random_psd(dim, 1 + t % dim, rng));
  return out;
}

}  // namespace

TEST_CASE("ObservationMatrix validation") {
  CHECK_THROWS_AS(ObservationMatrix(HermitianMatrix::zero(2)), ValidationError);
  CHECK_THROWS_AS(ObservationMatrix(diag(vec({1, -0.1}))), ValidationError);
  const ObservationMatrix a(diag(vec({2, 0})));
  CHECK(a.spectrum().eigenvalues(0) == 0.0);
  CHECK(a.spectrum().eigenvalues(1) == 2.0);
}

TEST_CASE("qsb_init") {
  const auto s = qsb_init(4);
  CHECK(s.round() == 1);
  CHECK(s.shift() == 0.0);
  CHECK(s.true_trace() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((s.rho().matrix() - ComplexMatrix::Identity(4, 4) * 0.25).norm() < 1e-16);
  CHECK((s.log_weights().matrix() + ComplexMatrix::Identity(4, 4) * std::log(4.0)).norm() < 1e-15);
  CHECK_THROWS_AS(qsb_init(0), DimensionError);
}

TEST_CASE("qsb_step examples") {
  SUBCASE("identity observations leave the state fixed") {
    auto s = qsb_init(3);
    const ObservationMatrix id(HermitianMatrix::identity(3));
    for (int t = 0; t < 5; ++t) s = qsb_step(s, id, 0.3);
    CHECK((s.rho().matrix() - ComplexMatrix::Identity(3, 3) / 3.0).norm() < 1e-14);
    CHECK(s.true_trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.round() == 6);
  }
  SUBCASE("diagonal observation") {
    const auto s = qsb_step(qsb_init(2), ObservationMatrix(diag(vec({2, 0}))), 0.5);
    CHECK(s.rho().matrix()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(s.rho().matrix()(1, 1).real() == doctest::Approx(0.25).epsilon(1e-14));
  }
  SUBCASE("non-commuting observation against the direct formula") {
    ComplexMatrix m(2, 2);
    m << 1, 1, 1, 1;
    const ObservationMatrix a{HermitianMatrix(m)};
    oracle::DirectQsb direct(2);
    auto s = qsb_init(2);
    ComplexMatrix m2(2, 2);
    m2 << 1, Complex(0, 1), Complex(0, -1), 1;
    const ObservationMatrix b{HermitianMatrix(m2) * 0.5};
    for (int t = 0; t < 6; ++t) {
      const auto& obs = t % 2 == 0 ? a : b;
      s = qsb_step(s, obs, 0.4);
      direct.step(obs.matrix(), 0.4);
      CHECK((s.rho().matrix() - direct.rho()).norm() < 1e-12);
      CHECK(s.true_trace() == doctest::Approx(direct.trace()).epsilon(1e-12));
    }
  }
  SUBCASE("eta outside (0, 1) and dimension mismatch") {
    const ObservationMatrix a(diag(vec({1, 0})));
    CHECK_THROWS_AS(qsb_step(qsb_init(2), a, 1.0), DomainError);
    CHECK_THROWS_AS(qsb_step(qsb_init(2), a, 0.0), DomainError);
    CHECK_THROWS_AS(qsb_step(qsb_init(3), a, 0.5), DimensionError);
  }
}

TEST_CASE("log-domain accumulator matches the direct recursion") {
  Rng rng(41);
  for (int dim : {2, 3, 4}) {
    const auto stream = psd_stream(dim, 30, rng);
    const double eta = learning_rate(dim, 30);
    oracle::DirectQsb direct(dim);
    auto s = qsb_init(dim);
    for (const auto& a : stream) {
      s = qsb_step(s, a, eta);
      direct.step(a.matrix(), eta);
    }
    CHECK((s.rho().matrix() - direct.rho()).norm() < 1e-9);
    CHECK(std::log(direct.trace()) == doctest::Approx(s.log_true_trace()).epsilon(1e-9));
    // log W = L + shift I
    const ComplexMatrix log_w =
        s.log_weights().matrix() + ComplexMatrix::Identity(dim, dim) * s.shift();
    CHECK((oracle::expm(log_w) - direct.w).norm() < 1e-9 * direct.w.norm());
  }
}

TEST_CASE("trace of W is non-increasing, at most one, and rho stays positive definite") {
  Rng rng(77);
  for (int dim : {2, 4, 8}) {
    const auto stream = psd_stream(dim, 300, rng);
    const auto tr = run_qst_game(stream, learning_rate(dim, 300), {.compute_comparator = false});
    for (std::size_t t = 0; t < tr.true_traces.size(); ++t) {
      CHECK(tr.true_traces[t] <= 1.0 + 1e-9);
      if (t > 0) CHECK(tr.true_traces[t] <= tr.true_traces[t - 1] * (1.0 + 1e-12));
      CHECK(tr.min_eigs[t] > 0.0);
    }
    CHECK(tr.final_state.true_trace() <= tr.true_traces.back() * (1.0 + 1e-12));
  }
}

TEST_CASE("diagonal observations reduce to Soft-Bayes") {
  Rng rng(5);
  const int dim = 6;
  const long t_max = 400;
  const double eta = learning_rate(dim, t_max);
  std::vector<ReturnVector> returns;
  std::vector<ObservationMatrix> obs;
  for (long t = 0; t < t_max; ++t) {
    RealVector a(dim);
    for (int i = 0; i < dim; ++i) a(i) = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
    if (a.sum() == 0.0) a(1) = 0.5;
    returns.emplace_back(a);
    obs.emplace_back(diag(a));
  }
  auto w = Portfolio::uniform(dim);
  auto s = qsb_init(dim);
  for (long t = 0; t < t_max; ++t) {
    w = soft_bayes_step(w, returns[t], eta);
    s = qsb_step(s, obs[t], eta);
    const RealVector d = s.rho().matrix().diagonal().real();
    CHECK((d - w.weights()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  const ComplexMatrix offdiag =
      s.rho().matrix() - ComplexMatrix(s.rho().matrix().diagonal().asDiagonal());
  CHECK(offdiag.norm() < 1e-12);

  const auto ops = run_ops_game(returns, eta);
  const auto qst = run_qst_game(obs, eta);
  for (long t = 0; t < t_max; ++t) CHECK(std::abs(ops.losses[t] - qst.losses[t]) < 1e-10);
  CHECK(qst.comparator_loss == doctest::Approx(ops.comparator_loss).epsilon(1e-6));
}

TEST_CASE("unitary covariance") {
  Rng rng(8);
  const int dim = 4;
  const ComplexMatrix u = random_unitary(dim, rng);
  const auto stream = psd_stream(dim, 50, rng);
  auto s = qsb_init(dim);
  auto r = qsb_init(dim);
  for (const auto& a : stream) {
    s = qsb_step(s, a, 0.2);
    r = qsb_step(r, ObservationMatrix(HermitianMatrix::symmetrized(u * a.matrix() * u.adjoint())), 0.2);
  }
  CHECK((u * s.rho().matrix() * u.adjoint() - r.rho().matrix()).norm() < 1e-10);
}

TEST_CASE("regret bound and game transcript") {
  CHECK(qsb_regret_bound(4, 100) == doctest::Approx(48.482695261738876).epsilon(1e-14));
  CHECK(qsb_regret_bound(2, 8) == ops_regret_bound(2, 8));

  SUBCASE("identity stream has zero loss") {
    const std::vector<ObservationMatrix> stream(10, ObservationMatrix(HermitianMatrix::identity(2)));
    const auto tr = run_qst_game(stream, 0.1);
    for (double l : tr.losses) CHECK(l == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(tr.regret) < 1e-9);
  }
  SUBCASE("regret on random streams") {
    Rng rng(13);
    for (int rep = 0; rep < 3; ++rep) {
      const auto stream = psd_stream(4, 200, rng);
      const auto tr = run_qst_game(stream, learning_rate(4, 200));
      CHECK(tr.comparator_gap <= 1e-7);
      CHECK(tr.regret <= qsb_regret_bound(4, 200));
      CHECK(tr.losses.size() == 200);
      CHECK(tr.averaged.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("errors carry the round") {
    std::vector<ObservationMatrix> stream(3, ObservationMatrix(HermitianMatrix::identity(2)));
    stream[2] = ObservationMatrix(HermitianMatrix::identity(3));
    try {
      run_qst_game(stream, 0.1, {.compute_comparator = false});
      FAIL("expected RoundError");
    } catch (const RoundError& e) {
      CHECK(e.round() == 3);
    }
  }
}

TEST_CASE("reverse Jensen gap") {
  SUBCASE("identity observation") {
    for (int dim : {2, 4}) {
      for (double eta : {0.1, 0.5, 0.9}) {
        const double g = reverse_jensen_gap(ObservationMatrix(HermitianMatrix::identity(dim)),
                                            DensityMatrix::maximally_mixed(dim), eta);
        CHECK(g == doctest::Approx(dim * std::log(1.0 / (1.0 - eta))).epsilon(1e-13));
      }
    }
  }
  SUBCASE("scalar grid") {
    for (int i = 1; i <= 99; ++i) {
      const double eta = i / 100.0;
      for (double x : {1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 10.0, 1e3, 1e6}) {
        const ObservationMatrix obs(HermitianMatrix::identity(1) * x);
        CHECK(reverse_jensen_gap(obs, DensityMatrix::maximally_mixed(1), eta) >= -1e-12);
      }
    }
  }
  SUBCASE("random triples") {
    Rng rng(3);
    for (int dim : {2, 4, 8}) {
      for (int rep = 0; rep < 100; ++rep) {
        const ObservationMatrix x(random_psd(dim, 1 + rep % dim, rng));
        const auto rho = random_density(dim, 1 + (rep / 2) % dim, rng);
        const double eta = rng.uniform(0.01, 0.99);
        if (hs_inner(x.hermitian(), rho.hermitian()) <= 1e-300) continue;
        CHECK(reverse_jensen_gap(x, rho, eta) >= -1e-9);
      }
    }
  }
  SUBCASE("zero overlap") {
    const auto rho = validate_density(diag(vec({1, 0})));
    CHECK_THROWS_AS(reverse_jensen_gap(ObservationMatrix(diag(vec({0, 1}))), rho, 0.5), DomainError);
  }
}

TEST_CASE("eta_bar") {
  CHECK(eta_bar(0.5) == 1.0);
  CHECK(eta_bar(0.2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(eta_bar(1.0), DomainError);
  CHECK_THROWS_AS(eta_bar(0.0), DomainError);
}
