#include "qsb/portfolio.hpp"

#include "qsb/errors.hpp"
#include "spg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qsb {

namespace {

void require_eta(double eta) {
  if (!(eta > 0.0 && eta < 1.0)) {
    std::ostringstream msg;
    msg << "learning rate must lie in (0, 1), got " << eta;
    throw DomainError(msg.str());
  }
}

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(msg.str());
  }
}

// Euclidean projection onto the probability simplex (sort and threshold).
RealVector project_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// Averaged comparator objective (1/T) sum_t -log <a_t, w>.
struct KellyProblem {
  Eigen::MatrixXd returns;  // T x D

  double value(const RealVector& w) const {
    const RealVector inner = returns * w;
    double acc = 0.0;
    for (Eigen::Index t = 0; t < inner.size(); ++t) {
      if (!(inner(t) > 0)) return std::numeric_limits<double>::infinity();
      acc -= std::log(inner(t));
    }
    return acc / static_cast<double>(inner.size());
  }
  // -r(w)
  RealVector gradient(const RealVector& w) const {
    const RealVector inner = returns * w;
    const RealVector inv = inner.cwiseInverse();
    return -(returns.transpose() * inv) / static_cast<double>(inner.size());
  }
  RealVector project(const RealVector& w) const { return project_simplex(w); }
  double inner(const RealVector& a, const RealVector& b) const { return a.dot(b); }
  double gap(const RealVector& w, const RealVector& grad) const {
    // max_j <grad, w - e_j>
    return grad.dot(w) - grad.minCoeff();
  }
};

}  // namespace

Portfolio Portfolio::uniform(int dim) {
  if (dim < 1) throw DimensionError("portfolio dimension must be positive");
  return Portfolio(RealVector::Constant(dim, 1.0 / dim));
}

Portfolio Portfolio::validated(const RealVector& w, double tol) {
  if (w.size() == 0) throw ValidationError("empty portfolio");
  if (!w.allFinite()) throw ValidationError("portfolio has non-finite entries");
  if (w.minCoeff() < 0.0) {
    std::ostringstream msg;
    msg << "portfolio has negative entry " << w.minCoeff();
    throw ValidationError(msg.str());
  }
  const double sum = w.sum();
  if (std::abs(sum - 1.0) > tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "portfolio sums to " << sum << " (tolerance " << tol << ")";
    throw ValidationError(msg.str());
  }
  return Portfolio(w);
}

ReturnVector::ReturnVector(RealVector rates) : a_(std::move(rates)) {
  if (a_.size() == 0) throw ValidationError("empty return vector");
  if (!a_.allFinite()) throw ValidationError("return vector has non-finite entries");
  if (a_.minCoeff() < 0.0) throw ValidationError("return vector has a negative entry");
  if (a_.maxCoeff() <= 0.0) throw ValidationError("return vector is identically zero");
}

double expected_log_loss(const Portfolio& w, std::span<const ReturnVector> returns) {
  if (returns.empty()) throw DomainError("expected_log_loss: empty sample");
  double acc = 0.0;
  for (const auto& a : returns) {
    require_same_dim(a.dim(), w.dim(), "expected_log_loss");
    const double v = a.rates().dot(w.weights());
    if (!(v > 0)) return std::numeric_limits<double>::infinity();
    acc -= std::log(v);
  }
  return acc / static_cast<double>(returns.size());
}

Portfolio soft_bayes_step(const Portfolio& w, const ReturnVector& a, double eta) {
  require_eta(eta);
  require_same_dim(w.dim(), a.dim(), "soft_bayes_step");
  const double inner = a.rates().dot(w.weights());
  if (!(inner > 0)) throw DomainError("soft_bayes_step: degenerate return, <a, w> = 0");
  const RealVector reweighted = a.rates().cwiseProduct(w.weights()) / inner;
  return Portfolio::trusted((1.0 - eta) * w.weights() + eta * reweighted);
}

double learning_rate(int dim, long rounds) {
  if (dim < 2) throw DomainError("learning_rate: D must be at least 2 (log D = 0)");
  if (rounds < 1) throw DomainError("learning_rate: T must be at least 1");
  const double log_d = std::log(static_cast<double>(dim));
  return std::sqrt(log_d) /
         (std::sqrt(static_cast<double>(rounds) * dim) + std::sqrt(log_d));
}

double ops_regret_bound(int dim, long rounds) {
  const double log_d = std::log(static_cast<double>(dim));
  return 2.0 * std::sqrt(static_cast<double>(rounds) * dim * log_d) + log_d;
}

double regret_bound_at(int dim, long t, double eta) {
  require_eta(eta);
  const double log_d = std::log(static_cast<double>(dim));
  return log_d / eta + static_cast<double>(t) * dim * eta / (1.0 - eta);
}

ComparatorResult best_fixed_portfolio(std::span<const ReturnVector> returns, double tol,
                                      long max_iter) {
  if (returns.empty()) throw DomainError("best_fixed_portfolio: empty return sequence");
  const int dim = returns.front().dim();
  KellyProblem prob;
  prob.returns.resize(static_cast<Eigen::Index>(returns.size()), dim);
  for (std::size_t t = 0; t < returns.size(); ++t) {
    require_same_dim(returns[t].dim(), dim, "best_fixed_portfolio");
    prob.returns.row(static_cast<Eigen::Index>(t)) = returns[t].rates().transpose();
  }

  detail::SpgOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  const auto res = detail::spg_minimize(prob, RealVector(RealVector::Constant(dim, 1.0 / dim)), opt);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "best_fixed_portfolio: gap " << res.gap << " above " << tol << " after "
        << res.iterations << " iterations";
    throw SolverError(msg.str(), res.gap);
  }
  ComparatorResult out;
  out.portfolio = Portfolio::trusted(res.x);
  out.loss = res.value * static_cast<double>(returns.size());
  out.gap = res.gap;
  out.iterations = res.iterations;
  return out;
}

OpsTranscript run_ops_game(std::span<const ReturnVector> stream, double eta,
                           const OpsOptions& options) {
  if (stream.empty()) throw DomainError("run_ops_game: empty stream");
  require_eta(eta);
  const int dim = stream.front().dim();

  OpsTranscript tr;
  tr.eta = eta;
  tr.portfolios.reserve(stream.size());
  tr.losses.reserve(stream.size());

  Portfolio w = Portfolio::uniform(dim);
  RealVector sum = RealVector::Zero(dim);
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const long round = static_cast<long>(t) + 1;
    try {
      require_same_dim(stream[t].dim(), dim, "run_ops_game");
      const double inner = stream[t].rates().dot(w.weights());
      if (!(inner > 0)) throw DomainError("degenerate return, <a_t, w_t> = 0");
      tr.portfolios.push_back(w);
      tr.losses.push_back(-std::log(inner));
      tr.cumulative_loss += tr.losses.back();
      sum += w.weights();
      w = soft_bayes_step(w, stream[t], eta);
    } catch (const Error& e) {
      throw RoundError(round, e.what());
    }
  }
  tr.final_portfolio = w;
  tr.averaged = Portfolio::trusted(sum / static_cast<double>(stream.size()));

  if (options.compute_comparator) {
    const auto cmp = best_fixed_portfolio(stream, options.comparator_tol);
    tr.comparator = cmp.portfolio;
    tr.comparator_gap = cmp.gap;
    tr.comparator_losses.reserve(stream.size());
    double total = 0.0;
    for (const auto& a : stream) {
      tr.comparator_losses.push_back(-std::log(a.rates().dot(cmp.portfolio.weights())));
      total += tr.comparator_losses.back();
    }
    tr.comparator_loss = total;
    tr.regret = tr.cumulative_loss - tr.comparator_loss;
  }
  return tr;
}

ReturnSampler empirical_sampler(std::vector<ReturnVector> support) {
  if (support.empty()) throw DomainError("empirical_sampler: empty support");
  return [support = std::move(support)](Rng& rng) -> ReturnVector {
    return support[rng.uniform_index(support.size())];
  };
}

Portfolio kelly_online_to_batch(const ReturnSampler& sampler, long rounds, double eta,
                                std::uint64_t seed) {
  if (rounds < 1) throw DomainError("kelly_online_to_batch: T must be at least 1");
  require_eta(eta);
  Rng rng(seed);
  ReturnVector a = sampler(rng);
  Portfolio w = Portfolio::uniform(a.dim());
  RealVector sum = RealVector::Zero(a.dim());
  for (long t = 1; t <= rounds; ++t) {
    if (t > 1) a = sampler(rng);
    sum += w.weights();
    try {
      w = soft_bayes_step(w, a, eta);
    } catch (const Error& e) {
      throw RoundError(t, e.what());
    }
  }
  return Portfolio::trusted(sum / static_cast<double>(rounds));
}

}  // namespace qsb
