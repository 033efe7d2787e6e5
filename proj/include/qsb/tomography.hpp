#pragma once

// Maximum-likelihood quantum state tomography: POVMs, synthetic measurement
// records, the negative log-likelihood f, Stochastic Q-Soft-Bayes and a
// certified batch solver used as the reference optimum.

#include "qsb/hermitian.hpp"
#include "qsb/qsoftbayes.hpp"
#include "qsb/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qsb {

// PSD elements summing to the identity.
class Povm {
 public:
  Povm() = default;
  explicit Povm(std::vector<HermitianMatrix> elements, const Tolerances& tol = kDefaultTolerances);

  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  int dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }

 private:
  std::vector<HermitianMatrix> elements_;
};

// Which POVM (0-based, in the order given to generate_dataset) and which of
// its outcomes produced a record.
struct Provenance {
  int povm = 0;
  int outcome = 0;
  bool operator==(const Provenance&) const = default;
};

class Dataset {
 public:
  Dataset() = default;
  // Throws ValidationError if empty, dimensions differ, or provenance is
  // neither empty nor one entry per record.
  explicit Dataset(std::vector<ObservationMatrix> matrices,
                   std::vector<Provenance> provenance = {});

  const std::vector<ObservationMatrix>& matrices() const { return matrices_; }
  const std::vector<Provenance>& provenance() const { return provenance_; }
  bool has_provenance() const { return !provenance_.empty(); }
  std::size_t size() const { return matrices_.size(); }
  int dim() const { return matrices_.front().dim(); }

 private:
  std::vector<ObservationMatrix> matrices_;
  std::vector<Provenance> provenance_;
};

// f(rho) = (1/N) sum_n -log tr(A_n rho). Throws DomainError naming the
// first n with tr(A_n rho) <= 0.
double ml_objective(const DensityMatrix& rho, std::span<const ObservationMatrix> data);
double ml_objective(const DensityMatrix& rho, const Dataset& data);

// R(rho) = (1/N) sum_n A_n / tr(A_n rho); -R is the gradient of f.
HermitianMatrix likelihood_ratio_operator(const DensityMatrix& rho,
                                          std::span<const ObservationMatrix> data);

struct Outcome {
  int index = 0;  // 0-based
  HermitianMatrix element;
};

// Draws j with probability tr(M_j rho). Probabilities are clipped to [0, 1];
// a sum off by more than tol.trace raises NumericalError.
Outcome sample_outcome(const DensityMatrix& rho, const Povm& povm, Rng& rng,
                       const Tolerances& tol = kDefaultTolerances);

// N shots, POVMs used round-robin; provenance is recorded.
Dataset generate_dataset(const DensityMatrix& rho_true, std::span<const Povm> povms, long shots,
                         Rng& rng);

// 3^q POVMs, one per Pauli string in {X, Y, Z}^q (first qubit most
// significant, X < Y < Z), each made of the 2^q product eigenprojectors.
// Outcome bit 0 selects the +1 eigenvector of a factor.
std::vector<Povm> pauli_basis_povms(int qubits);

// 1, 2, 4, ... and T itself.
std::vector<long> geometric_checkpoints(long rounds);

struct MlResult {
  DensityMatrix rho_bar;
  std::vector<long> checkpoints;
  std::vector<double> objective_trace;  // f(rho_bar_t) at each checkpoint
  std::uint64_t seed = 0;
  double eta = 0.0;
  long rounds = 0;
};

// Q-Soft-Bayes fed with records drawn uniformly (with multiplicity) from
// the data set, one Rng::uniform_index per round. eta defaults to
// learning_rate(D, T); checkpoints default to geometric_checkpoints(T).
MlResult stochastic_qsb(const Dataset& data, long rounds, std::optional<double> eta,
                        std::uint64_t seed, std::optional<std::vector<long>> checkpoints = {});

struct BatchMlResult {
  DensityMatrix rho;
  double value = 0.0;  // f(rho)
  double gap = 0.0;    // lambda_max(R(rho)) - tr(R(rho) rho)
  long iterations = 0;
};

// Minimizes f over density matrices by spectral projected gradient and
// certifies the result with the Frank-Wolfe gap. Throws SolverError with
// the best gap if max_iter is exhausted first.
BatchMlResult batch_ml_solve(std::span<const ObservationMatrix> data, double tol = 1e-7,
                             long max_iter = 100000);
BatchMlResult batch_ml_solve(const Dataset& data, double tol = 1e-7, long max_iter = 100000);

}  // namespace qsb
