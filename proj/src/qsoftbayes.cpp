#include "qsb/qsoftbayes.hpp"

#include "qsb/errors.hpp"
#include "qsb/portfolio.hpp"
#include "qsb/tomography.hpp"

#include <chrono>
#include <cmath>
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

HermitianMatrix reconstruct(const ComplexMatrix& vectors, const RealVector& values) {
  return HermitianMatrix::symmetrized(vectors * values.cast<Complex>().asDiagonal() *
                                      vectors.adjoint());
}

}  // namespace

ObservationMatrix::ObservationMatrix(const HermitianMatrix& a, const Tolerances& tol)
    : a_(a), spec_(eigh(a)) {
  if (a_.dim() == 0) throw ValidationError("observation matrix is empty");
  const double largest = spec_.eigenvalues.maxCoeff();
  const double smallest = spec_.eigenvalues.minCoeff();
  if (!(largest > 0.0)) throw ValidationError("observation matrix is zero or negative");
  if (smallest < -tol.psd * std::max(1.0, largest)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "observation matrix is not positive semi-definite: smallest eigenvalue "
        << smallest;
    throw ValidationError(msg.str());
  }
  spec_.eigenvalues = spec_.eigenvalues.cwiseMax(0.0);
}

double QsbState::true_trace() const { return std::exp(log_trace_); }

QsbState qsb_init(int dim) {
  if (dim < 1) throw DimensionError("qsb_init: dimension must be positive");
  QsbState s;
  s.log_w_ = HermitianMatrix::identity(dim) * (-std::log(static_cast<double>(dim)));
  s.shift_ = 0.0;
  s.log_trace_ = 0.0;
  s.rho_ = DensityMatrix::maximally_mixed(dim);
  s.probs_ = RealVector::Constant(dim, 1.0 / dim);
  s.vectors_ = ComplexMatrix::Identity(dim, dim);
  s.round_ = 1;
  return s;
}

double observation_likelihood(const QsbState& state, const ObservationMatrix& a) {
  require_same_dim(state.rho().dim(), a.dim(), "observation_likelihood");
  const ComplexMatrix& u = state.eigenvectors();
  const ComplexMatrix au = a.matrix() * u;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.cols(); ++i) {
    const double diag = u.col(i).dot(au.col(i)).real();  // u_i^H A u_i
    acc += state.rho_eigenvalues()(i) * std::max(diag, 0.0);
  }
  return acc;
}

QsbState qsb_step(const QsbState& state, const ObservationMatrix& a, double eta) {
  require_eta(eta);
  require_same_dim(state.rho().dim(), a.dim(), "qsb_step");
  const double likelihood = observation_likelihood(state, a);
  if (!(likelihood > 0.0)) throw DomainError("qsb_step: tr(A rho) = 0");

  // log G = V diag(log((1 - eta) + eta mu / tr(A rho))) V^H
  const auto& spec = a.spectrum();
  RealVector log_g(spec.eigenvalues.size());
  for (Eigen::Index k = 0; k < log_g.size(); ++k) {
    log_g(k) = std::log1p(eta * (spec.eigenvalues(k) / likelihood - 1.0));
  }
  const HermitianMatrix updated = state.log_weights() + reconstruct(spec.eigenvectors, log_g);

  const auto dec = eigh(updated);
  const double top = dec.eigenvalues.maxCoeff();
  const RealVector weights = (dec.eigenvalues.array() - top).exp().matrix();
  const double total = weights.sum();

  QsbState next;
  next.log_w_ = updated - HermitianMatrix::identity(updated.dim()) * top;
  next.shift_ = state.shift() + top;
  next.log_trace_ = next.shift_ + std::log(total);
  next.probs_ = weights / total;
  next.vectors_ = dec.eigenvectors;
  next.rho_ = DensityMatrix::trusted(reconstruct(next.vectors_, next.probs_));
  next.round_ = state.round() + 1;
  return next;
}

double qsb_regret_bound(int dim, long rounds) { return ops_regret_bound(dim, rounds); }

double eta_bar(double eta) {
  require_eta(eta);
  return eta / (1.0 - eta);
}

double reverse_jensen_gap(const ObservationMatrix& x, const DensityMatrix& rho, double eta) {
  require_eta(eta);
  require_same_dim(x.dim(), rho.dim(), "reverse_jensen_gap");
  const double inner = hs_inner(x.hermitian(), rho.hermitian());
  if (!(inner > 0.0)) throw DomainError("reverse_jensen_gap: <X, rho> <= 0");

  const auto& spec = x.spectrum();
  const double bar = eta / (1.0 - eta);
  // <log((1-eta) I + eta X), rho> = sum_k log1p(eta (mu_k - 1)) <v_k|rho|v_k>
  const ComplexMatrix weights = spec.eigenvectors.adjoint() * rho.matrix() * spec.eigenvectors;
  double mixed = 0.0;
  double entropy_term = 0.0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    const double mu = spec.eigenvalues(k);
    mixed += std::log1p(eta * (mu - 1.0)) * weights(k, k).real();
    entropy_term += std::log1p(bar * mu);
  }
  return mixed / eta + entropy_term - std::log(inner);
}

QstTranscript run_qst_game(std::span<const ObservationMatrix> stream, double eta,
                           const QstOptions& options) {
  if (stream.empty()) throw DomainError("run_qst_game: empty stream");
  require_eta(eta);
  const int dim = stream.front().dim();
  const std::size_t rounds = stream.size();

  QstTranscript tr;
  tr.eta = eta;
  tr.losses.reserve(rounds);
  tr.true_traces.reserve(rounds);
  tr.min_eigs.reserve(rounds);
  tr.step_time_ns.reserve(rounds);

  QsbState state = qsb_init(dim);
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t t = 0; t < rounds; ++t) {
    const long round = static_cast<long>(t) + 1;
    try {
      require_same_dim(stream[t].dim(), dim, "run_qst_game");
      tr.losses.push_back(-std::log(observation_likelihood(state, stream[t])));
      tr.true_traces.push_back(state.true_trace());
      tr.min_eigs.push_back(state.min_eigenvalue());
      tr.cumulative_loss += tr.losses.back();
      sum += state.rho().matrix();
      if (options.record_timing) {
        const auto start = std::chrono::steady_clock::now();
        state = qsb_step(state, stream[t], eta);
        const auto stop = std::chrono::steady_clock::now();
        tr.step_time_ns.push_back(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
      } else {
        state = qsb_step(state, stream[t], eta);
        tr.step_time_ns.push_back(0);
      }
    } catch (const Error& e) {
      throw RoundError(round, e.what());
    }
  }
  tr.final_state = state;
  tr.averaged =
      DensityMatrix::trusted(HermitianMatrix::symmetrized(sum / static_cast<double>(rounds)));

  if (options.compute_comparator) {
    const auto cmp = batch_ml_solve(stream, options.comparator_tol);
    tr.comparator = cmp.rho;
    tr.comparator_gap = cmp.gap;
    tr.comparator_losses.reserve(rounds);
    double total = 0.0;
    for (const auto& a : stream) {
      tr.comparator_losses.push_back(-std::log(hs_inner(a.hermitian(), cmp.rho.hermitian())));
      total += tr.comparator_losses.back();
    }
    tr.comparator_loss = total;
    tr.regret = tr.cumulative_loss - tr.comparator_loss;
  }
  return tr;
}

}  // namespace qsb
