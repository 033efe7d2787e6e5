#pragma once

#include <stdexcept>
#include <string>

namespace qsb {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a scalar/matrix function (log of a
// non-positive eigenvalue, support violation, zero inner product, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A value failed one of its type invariants (Hermitian, PSD, unit trace, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Eigen decomposition failure or a probability vector off the simplex.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Iterative solver hit its iteration cap before certifying optimality.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_gap)
      : Error(what), best_gap_(best_gap) {}
  double best_gap() const { return best_gap_; }

 private:
  double best_gap_;
};

// Error raised while running a game, tagged with the (1-based) round.
class RoundError : public Error {
 public:
  RoundError(long round, const std::string& what)
      : Error("round " + std::to_string(round) + ": " + what), round_(round) {}
  long round() const { return round_; }

 private:
  long round_;
};

}  // namespace qsb
