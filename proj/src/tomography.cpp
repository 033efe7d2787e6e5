#include "qsb/tomography.hpp"

#include "qsb/errors.hpp"
#include "qsb/portfolio.hpp"
#include "spg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>

namespace qsb {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(msg.str());
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

RealVector project_simplex(const RealVector& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// Distinct data matrices with their empirical weights; rows of `stacked`
// are the column-major entries of each matrix, so
// tr(A_k rho) = Re(stacked.row(k) * conj(vec(rho))).
struct WeightedData {
  int dim = 0;
  Eigen::MatrixXcd stacked;
  RealVector weights;

  explicit WeightedData(std::span<const ObservationMatrix> data) {
    if (data.empty()) throw DomainError("empty data set");
    dim = data.front().dim();
    const Eigen::Index n2 = static_cast<Eigen::Index>(dim) * dim;
    std::unordered_map<std::string, Eigen::Index> index;
    std::vector<const ObservationMatrix*> unique;
    std::vector<double> counts;
    for (const auto& a : data) {
      require_same_dim(a.dim(), dim, "batch_ml_solve");
      std::string key(reinterpret_cast<const char*>(a.matrix().data()),
                      sizeof(Complex) * static_cast<std::size_t>(n2));
      auto [it, inserted] = index.try_emplace(std::move(key), static_cast<Eigen::Index>(unique.size()));
      if (inserted) {
        unique.push_back(&a);
        counts.push_back(0.0);
      }
      counts[static_cast<std::size_t>(it->second)] += 1.0;
    }
    stacked.resize(static_cast<Eigen::Index>(unique.size()), n2);
    weights.resize(static_cast<Eigen::Index>(unique.size()));
    for (std::size_t k = 0; k < unique.size(); ++k) {
      stacked.row(static_cast<Eigen::Index>(k)) =
          Eigen::Map<const Eigen::RowVectorXcd>(unique[k]->matrix().data(), n2);
      weights(static_cast<Eigen::Index>(k)) = counts[k] / static_cast<double>(data.size());
    }
  }

  RealVector likelihoods(const ComplexMatrix& rho) const {
    const Eigen::Map<const Eigen::VectorXcd> v(rho.data(), rho.size());
    return (stacked * v.conjugate()).real();
  }
};

struct MlProblem {
  const WeightedData& data;

  double value(const ComplexMatrix& rho) const {
    const RealVector p = data.likelihoods(rho);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (!(p(k) > 0)) return std::numeric_limits<double>::infinity();
      acc -= data.weights(k) * std::log(p(k));
    }
    return acc;
  }
  // -R(rho)
  ComplexMatrix gradient(const ComplexMatrix& rho) const {
    const RealVector p = data.likelihoods(rho);
    const Eigen::VectorXcd coeff = data.weights.cwiseQuotient(p).cast<Complex>();
    const Eigen::VectorXcd v = data.stacked.transpose() * coeff;
    ComplexMatrix r = Eigen::Map<const ComplexMatrix>(v.data(), data.dim, data.dim);
    return -0.5 * (r + r.adjoint());
  }
  ComplexMatrix project(const ComplexMatrix& x) const {
    const auto dec = eigh(HermitianMatrix::symmetrized(x));
    const RealVector p = project_simplex(dec.eigenvalues);
    return HermitianMatrix::symmetrized(dec.eigenvectors * p.cast<Complex>().asDiagonal() *
                                        dec.eigenvectors.adjoint())
        .matrix();
  }
  double inner(const ComplexMatrix& a, const ComplexMatrix& b) const {
    return (a.array().real() * b.array().real() + a.array().imag() * b.array().imag()).sum();
  }
  double gap(const ComplexMatrix& rho, const ComplexMatrix& grad) const {
    const ComplexMatrix r = -grad;
    const double top = eigh(HermitianMatrix::symmetrized(r)).eigenvalues.maxCoeff();
    return top - inner(r, rho);
  }
};

}  // namespace

Povm::Povm(std::vector<HermitianMatrix> elements, const Tolerances& tol)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("POVM has no elements");
  const int dim = elements_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    if (elements_[j].dim() != dim) throw ValidationError("POVM elements differ in dimension");
    const double smallest = eigh(elements_[j]).eigenvalues.minCoeff();
    if (smallest < -tol.psd) {
      std::ostringstream msg;
      msg << "POVM element " << j << " is not PSD (eigenvalue " << smallest << ")";
      throw ValidationError(msg.str());
    }
    sum += elements_[j].matrix();
  }
  const double defect = (sum - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > tol.trace) {
    std::ostringstream msg;
    msg << "POVM elements do not sum to the identity (max entry error " << defect << ")";
    throw ValidationError(msg.str());
  }
}

Dataset::Dataset(std::vector<ObservationMatrix> matrices, std::vector<Provenance> provenance)
    : matrices_(std::move(matrices)), provenance_(std::move(provenance)) {
  if (matrices_.empty()) throw ValidationError("data set is empty");
  const int dim = matrices_.front().dim();
  for (const auto& a : matrices_) {
    if (a.dim() != dim) throw ValidationError("data set matrices differ in dimension");
  }
  if (!provenance_.empty() && provenance_.size() != matrices_.size()) {
    throw ValidationError("provenance must have one entry per record");
  }
}

double ml_objective(const DensityMatrix& rho, std::span<const ObservationMatrix> data) {
  if (data.empty()) throw DomainError("ml_objective: empty data set");
  double acc = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    require_same_dim(data[n].dim(), rho.dim(), "ml_objective");
    const double p = hs_inner(data[n].hermitian(), rho.hermitian());
    if (!(p > 0)) {
      std::ostringstream msg;
      msg << "ml_objective: tr(A_n rho) = " << p << " <= 0 at record n = " << n;
      throw DomainError(msg.str());
    }
    acc -= std::log(p);
  }
  return acc / static_cast<double>(data.size());
}

double ml_objective(const DensityMatrix& rho, const Dataset& data) {
  return ml_objective(rho, std::span<const ObservationMatrix>(data.matrices()));
}

HermitianMatrix likelihood_ratio_operator(const DensityMatrix& rho,
                                          std::span<const ObservationMatrix> data) {
  if (data.empty()) throw DomainError("likelihood_ratio_operator: empty data set");
  ComplexMatrix r = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& a : data) {
    require_same_dim(a.dim(), rho.dim(), "likelihood_ratio_operator");
    const double p = hs_inner(a.hermitian(), rho.hermitian());
    if (!(p > 0)) throw DomainError("likelihood_ratio_operator: tr(A_n rho) <= 0");
    r += a.matrix() / p;
  }
  return HermitianMatrix::symmetrized(r / static_cast<double>(data.size()));
}

Outcome sample_outcome(const DensityMatrix& rho, const Povm& povm, Rng& rng,
                       const Tolerances& tol) {
  require_same_dim(povm.dim(), rho.dim(), "sample_outcome");
  const auto& el = povm.elements();
  std::vector<double> probs(el.size());
  double total = 0.0;
  for (std::size_t j = 0; j < el.size(); ++j) {
    probs[j] = std::clamp(hs_inner(el[j], rho.hermitian()), 0.0, 1.0);
    total += probs[j];
  }
  if (std::abs(total - 1.0) > tol.trace) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sample_outcome: outcome probabilities sum to " << total;
    throw NumericalError(msg.str());
  }
  const double u = rng.uniform() * total;
  double cum = 0.0;
  std::size_t pick = el.size() - 1;
  for (std::size_t j = 0; j < el.size(); ++j) {
    cum += probs[j];
    if (u < cum) {
      pick = j;
      break;
    }
  }
  // Never return a zero-probability trailing outcome because of rounding.
  while (probs[pick] <= 0.0 && pick > 0) --pick;
  return {static_cast<int>(pick), el[pick]};
}

Dataset generate_dataset(const DensityMatrix& rho_true, std::span<const Povm> povms, long shots,
                         Rng& rng) {
  if (povms.empty()) throw DomainError("generate_dataset: no POVMs");
  if (shots < 1) throw DomainError("generate_dataset: N must be positive");

  // Observation matrices (and their spectra) are built once per element.
  std::vector<std::vector<std::optional<ObservationMatrix>>> cache(povms.size());
  for (std::size_t p = 0; p < povms.size(); ++p) cache[p].resize(povms[p].size());

  std::vector<ObservationMatrix> matrices;
  std::vector<Provenance> provenance;
  matrices.reserve(static_cast<std::size_t>(shots));
  provenance.reserve(static_cast<std::size_t>(shots));
  for (long n = 0; n < shots; ++n) {
    const std::size_t p = static_cast<std::size_t>(n) % povms.size();
    const Outcome out = sample_outcome(rho_true, povms[p], rng);
    auto& slot = cache[p][static_cast<std::size_t>(out.index)];
    if (!slot) slot.emplace(out.element);
    matrices.push_back(*slot);
    provenance.push_back({static_cast<int>(p), out.index});
  }
  return Dataset(std::move(matrices), std::move(provenance));
}

std::vector<Povm> pauli_basis_povms(int qubits) {
  if (qubits < 1) throw DomainError("pauli_basis_povms: need at least one qubit");
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  // eigenvectors[axis][bit]: X, Y, Z; bit 0 is the +1 eigenvector.
  std::array<std::array<Eigen::Vector2cd, 2>, 3> eig;
  eig[0][0] << h, h;
  eig[0][1] << h, -h;
  eig[1][0] << h, i * h;
  eig[1][1] << h, -i * h;
  eig[2][0] << 1, 0;
  eig[2][1] << 0, 1;

  long strings = 1;
  for (int k = 0; k < qubits; ++k) strings *= 3;
  const long outcomes = 1L << qubits;

  std::vector<Povm> povms;
  povms.reserve(static_cast<std::size_t>(strings));
  for (long s = 0; s < strings; ++s) {
    std::vector<int> axes(static_cast<std::size_t>(qubits));
    long rest = s;
    for (int k = qubits - 1; k >= 0; --k) {
      axes[static_cast<std::size_t>(k)] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    std::vector<HermitianMatrix> elements;
    elements.reserve(static_cast<std::size_t>(outcomes));
    for (long b = 0; b < outcomes; ++b) {
      ComplexMatrix proj = ComplexMatrix::Ones(1, 1);
      for (int k = 0; k < qubits; ++k) {
        const int bit = static_cast<int>((b >> (qubits - 1 - k)) & 1);
        const Eigen::Vector2cd& v = eig[static_cast<std::size_t>(axes[static_cast<std::size_t>(k)])]
                                       [static_cast<std::size_t>(bit)];
        proj = kron(proj, v * v.adjoint());
      }
      elements.push_back(HermitianMatrix::symmetrized(proj));
    }
    povms.emplace_back(std::move(elements));
  }
  return povms;
}

std::vector<long> geometric_checkpoints(long rounds) {
  std::vector<long> out;
  for (long t = 1; t < rounds; t *= 2) out.push_back(t);
  if (rounds >= 1) out.push_back(rounds);
  return out;
}

MlResult stochastic_qsb(const Dataset& data, long rounds, std::optional<double> eta,
                        std::uint64_t seed, std::optional<std::vector<long>> checkpoints) {
  if (rounds < 1) throw DomainError("stochastic_qsb: T must be at least 1");
  const int dim = data.dim();
  const double rate = eta ? *eta : learning_rate(dim, rounds);

  std::vector<long> marks = checkpoints ? *checkpoints : geometric_checkpoints(rounds);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  if (!marks.empty() && (marks.front() < 1 || marks.back() > rounds)) {
    throw DomainError("stochastic_qsb: checkpoints must lie in [1, T]");
  }

  MlResult res;
  res.seed = seed;
  res.eta = rate;
  res.rounds = rounds;
  res.checkpoints = marks;
  res.objective_trace.reserve(marks.size());

  const auto& records = data.matrices();
  Rng rng(seed);
  QsbState state = qsb_init(dim);
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  std::size_t next_mark = 0;
  for (long t = 1; t <= rounds; ++t) {
    const auto& b = records[rng.uniform_index(records.size())];
    sum += state.rho().matrix();
    try {
      state = qsb_step(state, b, rate);
    } catch (const Error& e) {
      throw RoundError(t, e.what());
    }
    if (next_mark < marks.size() && marks[next_mark] == t) {
      const auto avg =
          DensityMatrix::trusted(HermitianMatrix::symmetrized(sum / static_cast<double>(t)));
      res.objective_trace.push_back(ml_objective(avg, data));
      ++next_mark;
    }
  }
  res.rho_bar =
      DensityMatrix::trusted(HermitianMatrix::symmetrized(sum / static_cast<double>(rounds)));
  return res;
}

BatchMlResult batch_ml_solve(std::span<const ObservationMatrix> data, double tol, long max_iter) {
  const WeightedData weighted(data);
  const MlProblem prob{weighted};
  detail::SpgOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  const int dim = weighted.dim;
  const auto res = detail::spg_minimize(
      prob, ComplexMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim)), opt);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "batch_ml_solve: gap " << res.gap << " above " << tol << " after " << res.iterations
        << " iterations";
    throw SolverError(msg.str(), res.gap);
  }
  BatchMlResult out;
  out.rho = DensityMatrix::trusted(HermitianMatrix::symmetrized(res.x));
  out.value = res.value;
  out.gap = res.gap;
  out.iterations = res.iterations;
  return out;
}

BatchMlResult batch_ml_solve(const Dataset& data, double tol, long max_iter) {
  return batch_ml_solve(std::span<const ObservationMatrix>(data.matrices()), tol, max_iter);
}

}  // namespace qsb
