#pragma once

// Seeded experiment runner behind the `qsb` command line tool. Every mode
// writes its tables and matrices into ExperimentConfig::out together with
// `run.cfg` (the resolved configuration, loadable with --config) and
// `manifest.json` (configuration echo, hash, RNG, seeds, versions, wall
// clock, artifact list).

#include "qsb/errors.hpp"
#include "qsb/hermitian.hpp"
#include "qsb/portfolio.hpp"
#include "qsb/qsoftbayes.hpp"
#include "qsb/tomography.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qsb {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Mode { OpsGame, QstGame, MlRun, ScalingBench, Validate };
enum class PovmSpec { PauliBasis, RandomRank1, FromFile };

std::string to_string(Mode m);
std::string to_string(PovmSpec p);
Mode parse_mode(const std::string& s);
PovmSpec parse_povm(const std::string& s);

struct ExperimentConfig {
  Mode mode = Mode::MlRun;
  std::optional<int> qubits;
  std::optional<int> dim;
  PovmSpec povm = PovmSpec::PauliBasis;
  long shots = 6000;
  long rounds = 1000;
  std::optional<double> eta;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t data_seed = 0;
  // "geometric" or a comma separated list of rounds.
  std::string checkpoints = "geometric";
  std::filesystem::path out = "qsb-out";
  std::filesystem::path data;  // input file for from-file and validate
  std::vector<int> bench_dims{8, 16, 32, 64};
  bool timing = false;  // fill step_time_ns in qst-game transcripts
  double oracle_tol = 1e-7;
  double comparator_tol = 1e-8;
  Tolerances tol;

  // D = 2^q when qubits are given; throws ConfigError when neither is set
  // or they disagree.
  int resolved_dim() const;
  // Throws ConfigError on any invalid combination.
  void validate() const;
  // `key = value` lines accepted by `qsb --config`.
  std::string to_text() const;
  std::vector<long> checkpoint_list() const;
};

// FNV-1a 64 of ExperimentConfig::to_text(), as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct ExperimentOutcome {
  int exit_code = 0;
  std::vector<std::filesystem::path> artifacts;
};

// Runs one mode over all seeds (in parallel, up to QSB_THREADS workers) and
// writes the artifacts. Throws ConfigError for invalid configurations and
// qsb::Error for numerical failures, tagged with the failing seed.
ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log);

// Tables shared by the modes; fixed column order, %.17g floats.
void write_ops_transcript(const std::filesystem::path& path, const OpsTranscript& tr, int dim);
void write_qst_transcript(const std::filesystem::path& path, const QstTranscript& tr);
// Columns: checkpoint, t, f_rho_bar, bound, gap_to_oracle. bound is the
// online-to-batch bound regret_bound_at(D, t, eta) / t.
void write_ml_result(const std::filesystem::path& path, const MlResult& res, int dim,
                     double f_star);

// Synthetic streams used by the game modes. Return vectors have entries
// that are 0 with probability 0.3 and uniform on [0, 2) otherwise (redrawn
// if all zero). Observation streams are Haar-random projectors for
// rank 1 and complex Wishart matrices G G^H (G of size D x rank) otherwise.
std::vector<ReturnVector> random_return_stream(int dim, long rounds, Rng& rng);
std::vector<ObservationMatrix> random_observation_stream(int dim, long rounds, int rank, Rng& rng);

// Number of worker threads for seed-level parallelism (QSB_THREADS or the
// hardware concurrency).
unsigned worker_threads();

}  // namespace qsb
