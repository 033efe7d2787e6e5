#pragma once

// Online quantum state tomography with Q-Soft-Bayes.
//
// The learner keeps L_t = log W_t rather than W_t. Each round adds
// log((1 - eta) I + eta A_t / tr(A_t rho_t)) to L_t and recovers rho_{t+1}
// as exp(L_{t+1}) / tr(exp(L_{t+1})). After every update the largest
// eigenvalue c of L is moved into a scalar `shift`, so the stored matrix has
// eigenvalues <= 0 and the true log W_t is L + shift * I.

#include "qsb/hermitian.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace qsb {

// Hermitian PSD, nonzero matrix announced by the environment. Its spectral
// decomposition is computed once on construction and reused by every
// update that consumes it.
class ObservationMatrix {
 public:
  ObservationMatrix() = default;
  // Throws ValidationError if the smallest eigenvalue is below
  // -tol.psd * max(1, largest) or the matrix is zero.
  explicit ObservationMatrix(const HermitianMatrix& a, const Tolerances& tol = kDefaultTolerances);

  const HermitianMatrix& hermitian() const { return a_; }
  const ComplexMatrix& matrix() const { return a_.matrix(); }
  int dim() const { return a_.dim(); }
  // Eigenvalues clamped at zero.
  const SpectralDecomposition& spectrum() const { return spec_; }

 private:
  HermitianMatrix a_;
  SpectralDecomposition spec_;
};

class QsbState {
 public:
  const HermitianMatrix& log_weights() const { return log_w_; }
  double shift() const { return shift_; }
  const DensityMatrix& rho() const { return rho_; }
  long round() const { return round_; }

  // log tr(W_t) = shift + logsumexp(eig(L)).
  double log_true_trace() const { return log_trace_; }
  double true_trace() const;
  // Eigenpairs of rho (same eigenvectors as L).
  const RealVector& rho_eigenvalues() const { return probs_; }
  const ComplexMatrix& eigenvectors() const { return vectors_; }
  double min_eigenvalue() const { return probs_.minCoeff(); }

 private:
  friend QsbState qsb_init(int dim);
  friend QsbState qsb_step(const QsbState&, const ObservationMatrix&, double);

  HermitianMatrix log_w_;
  double shift_ = 0.0;
  double log_trace_ = 0.0;
  DensityMatrix rho_;
  RealVector probs_;
  ComplexMatrix vectors_;
  long round_ = 1;
};

// rho_1 = W_1 = I / D.
QsbState qsb_init(int dim);

// One Q-Soft-Bayes update. tr(A rho_t) is evaluated in the eigenbasis of
// rho_t so it stays positive whenever A is nonzero.
QsbState qsb_step(const QsbState& state, const ObservationMatrix& a, double eta);

// tr(A rho) evaluated in the eigenbasis of the state with each term clamped
// at zero.
double observation_likelihood(const QsbState& state, const ObservationMatrix& a);

// 2 sqrt(T D log D) + log D
double qsb_regret_bound(int dim, long rounds);

// eta / (1 - eta)
double eta_bar(double eta);

// RHS - LHS of the reverse Jensen inequality
//   log <X, rho> <= (1/eta) <log((1-eta) I + eta X), rho>
//                   + tr log(I + eta/(1-eta) X).
// Throws DomainError if <X, rho> <= 0.
double reverse_jensen_gap(const ObservationMatrix& x, const DensityMatrix& rho, double eta);

struct QstOptions {
  bool compute_comparator = true;
  double comparator_tol = 1e-7;
  bool record_timing = true;
};

struct QstTranscript {
  std::vector<double> losses;        // -log tr(A_t rho_t)
  std::vector<double> true_traces;   // tr(W_t)
  std::vector<double> min_eigs;      // smallest eigenvalue of rho_t
  std::vector<std::int64_t> step_time_ns;  // zeros unless timing recorded
  double eta = 0.0;
  double cumulative_loss = 0.0;
  DensityMatrix averaged;            // (rho_1 + ... + rho_T) / T
  QsbState final_state;              // state after round T
  // Populated when QstOptions::compute_comparator is set.
  DensityMatrix comparator;
  std::vector<double> comparator_losses;
  double comparator_loss = 0.0;
  double comparator_gap = 0.0;
  double regret = 0.0;
};

// Plays Q-Soft-Bayes against `stream`; the comparator is the batch ML
// solution over the stream. Errors are rethrown as RoundError.
QstTranscript run_qst_game(std::span<const ObservationMatrix> stream, double eta,
                           const QstOptions& options = {});

}  // namespace qsb
