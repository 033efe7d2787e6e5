#pragma once

// Classical online portfolio selection: the Soft-Bayes learner, the
// investor/market game with regret accounting, the best fixed portfolio in
// hindsight and the online-to-batch Kelly estimate.

#include "qsb/hermitian.hpp"
#include "qsb/random.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qsb {

// Point of the probability simplex.
class Portfolio {
 public:
  Portfolio() = default;

  static Portfolio uniform(int dim);
  // Throws ValidationError unless entries are >= 0 and sum to 1 within tol.
  static Portfolio validated(const RealVector& w, double tol = kDefaultTolerances.trace);
  static Portfolio trusted(RealVector w) { return Portfolio(std::move(w)); }

  const RealVector& weights() const { return w_; }
  int dim() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_(i); }

 private:
  explicit Portfolio(RealVector w) : w_(std::move(w)) {}
  RealVector w_;
};

// Non-negative, not identically zero vector of return rates.
class ReturnVector {
 public:
  ReturnVector() = default;
  explicit ReturnVector(RealVector rates);  // throws ValidationError

  const RealVector& rates() const { return a_; }
  int dim() const { return static_cast<int>(a_.size()); }

 private:
  RealVector a_;
};

double expected_log_loss(const Portfolio& w, std::span<const ReturnVector> returns);

// (1 - eta) w + eta (a o w) / <a, w>. Throws DomainError if <a, w> = 0.
Portfolio soft_bayes_step(const Portfolio& w, const ReturnVector& a, double eta);

// eta = sqrt(log D) / (sqrt(T D) + sqrt(log D)), i.e. eta / (1 - eta) =
// sqrt(log D / (T D)), the value minimizing the regret bound.
double learning_rate(int dim, long rounds);

// 2 sqrt(T D log D) + log D
double ops_regret_bound(int dim, long rounds);

// Regret bound after t rounds for a fixed learning rate:
// (log D) / eta + t D eta / (1 - eta). Equals ops_regret_bound(D, T) at
// t = T with eta = learning_rate(D, T).
double regret_bound_at(int dim, long t, double eta);

struct ComparatorResult {
  Portfolio portfolio;
  double loss = 0.0;  // cumulative: sum_t -log <a_t, w*>
  double gap = 0.0;   // Frank-Wolfe gap of the averaged objective
  long iterations = 0;
};

// Minimizes sum_t -log <a_t, w> over the simplex. The certificate is the
// Frank-Wolfe gap of the averaged objective, max_j r_j - <r, w> with
// r = (1/T) sum_t a_t / <a_t, w>. Throws SolverError past max_iter.
ComparatorResult best_fixed_portfolio(std::span<const ReturnVector> returns, double tol = 1e-8,
                                      long max_iter = 100000);

struct OpsOptions {
  bool compute_comparator = true;
  double comparator_tol = 1e-8;
};

struct OpsTranscript {
  std::vector<Portfolio> portfolios;  // w_1 ... w_T
  std::vector<double> losses;         // -log <a_t, w_t>
  Portfolio final_portfolio;          // w_{T+1}
  Portfolio averaged;                 // (w_1 + ... + w_T) / T
  double eta = 0.0;
  double cumulative_loss = 0.0;
  // Populated when OpsOptions::compute_comparator is set.
  Portfolio comparator;
  std::vector<double> comparator_losses;  // -log <a_t, w*>
  double comparator_loss = 0.0;
  double comparator_gap = 0.0;
  double regret = 0.0;
};

// Plays Soft-Bayes from the uniform portfolio against the given stream.
// Errors are rethrown as RoundError carrying the 1-based round.
OpsTranscript run_ops_game(std::span<const ReturnVector> stream, double eta,
                           const OpsOptions& options = {});

using ReturnSampler = std::function<ReturnVector(Rng&)>;

// Uniform draw (with multiplicity) from a fixed list; one uniform_index per
// call.
ReturnSampler empirical_sampler(std::vector<ReturnVector> support);

// Runs Soft-Bayes against T i.i.d. draws of `sampler` seeded by `seed` and
// returns the averaged iterate.
Portfolio kelly_online_to_batch(const ReturnSampler& sampler, long rounds, double eta,
                                std::uint64_t seed);

}  // namespace qsb
