#include "qsb/experiment.hpp"

#include "qsb/io.hpp"
#include "qsb/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#ifndef QSB_VERSION
#define QSB_VERSION "unknown"
#endif

namespace qsb {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::OpsGame: return "ops-game";
    case Mode::QstGame: return "qst-game";
    case Mode::MlRun: return "ml-run";
    case Mode::ScalingBench: return "scaling-bench";
    case Mode::Validate: return "validate";
  }
  return "?";
}

std::string to_string(PovmSpec p) {
  switch (p) {
    case PovmSpec::PauliBasis: return "pauli-basis";
    case PovmSpec::RandomRank1: return "random-rank1";
    case PovmSpec::FromFile: return "from-file";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  for (Mode m : {Mode::OpsGame, Mode::QstGame, Mode::MlRun, Mode::ScalingBench, Mode::Validate}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

PovmSpec parse_povm(const std::string& s) {
  for (PovmSpec p : {PovmSpec::PauliBasis, PovmSpec::RandomRank1, PovmSpec::FromFile}) {
    if (to_string(p) == s) return p;
  }
  throw ConfigError("unknown povm spec '" + s + "'");
}

int ExperimentConfig::resolved_dim() const {
  if (qubits) {
    if (*qubits < 1 || *qubits > 12) throw ConfigError("qubits must be in [1, 12]");
    const int d = 1 << *qubits;
    if (dim && *dim != d) {
      throw ConfigError("dim " + std::to_string(*dim) + " disagrees with qubits (D = 2^q = " +
                        std::to_string(d) + ")");
    }
    return d;
  }
  if (dim) {
    if (*dim < 1) throw ConfigError("dim must be positive");
    return *dim;
  }
  throw ConfigError("one of --dim / --qubits is required");
}

std::vector<long> ExperimentConfig::checkpoint_list() const {
  if (checkpoints == "geometric" || checkpoints.empty()) return geometric_checkpoints(rounds);
  if (checkpoints == "none") return {};
  std::vector<long> out;
  std::stringstream ss(checkpoints);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad checkpoint '" + item + "'");
    }
  }
  for (long c : out) {
    if (c < 1 || c > rounds) throw ConfigError("checkpoints must lie in [1, rounds]");
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be at least 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (eta && !(*eta > 0.0 && *eta < 1.0)) throw ConfigError("eta must lie in (0, 1)");
  if (shots < 1) throw ConfigError("shots must be at least 1");
  if (!(oracle_tol > 0) || !(comparator_tol > 0)) throw ConfigError("tolerances must be positive");
  (void)checkpoint_list();
  switch (mode) {
    case Mode::Validate:
      if (data.empty()) throw ConfigError("validate needs --data <file>");
      return;
    case Mode::ScalingBench:
      if (bench_dims.empty()) throw ConfigError("scaling-bench needs --bench-dims");
      for (int d : bench_dims) {
        if (d < 1) throw ConfigError("bench dimensions must be positive");
      }
      return;
    case Mode::OpsGame:
      if (povm == PovmSpec::FromFile) {
        if (data.empty()) throw ConfigError("--povm from-file needs --data <file>");
        return;
      }
      if (resolved_dim() < 2) throw ConfigError("ops-game needs D >= 2");
      return;
    case Mode::QstGame:
    case Mode::MlRun:
      if (povm == PovmSpec::FromFile) {
        if (data.empty()) throw ConfigError("--povm from-file needs --data <file>");
        return;
      }
      if (resolved_dim() < 2) throw ConfigError(to_string(mode) + " needs D >= 2");
      if (povm == PovmSpec::PauliBasis && !qubits) {
        const int d = resolved_dim();
        if ((d & (d - 1)) != 0) throw ConfigError("pauli-basis needs D to be a power of two");
      }
      return;
  }
}

namespace {

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

int qubits_of(int dim) {
  int q = 0;
  while ((1 << q) < dim) ++q;
  if ((1 << q) != dim) throw ConfigError("D is not a power of two");
  return q;
}

}  // namespace

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  out << "mode = " << to_string(mode) << "\n";
  if (qubits) out << "qubits = " << *qubits << "\n";
  if (dim) out << "dim = " << *dim << "\n";
  out << "povm = " << to_string(povm) << "\n";
  out << "shots = " << shots << "\n";
  out << "rounds = " << rounds << "\n";
  if (eta) out << "eta = " << io::format_double(*eta) << "\n";
  out << "seeds = " << join(seeds) << "\n";
  out << "data-seed = " << data_seed << "\n";
  out << "checkpoints = " << checkpoints << "\n";
  if (!data.empty()) out << "data = " << data.string() << "\n";
  out << "bench-dims = " << join(bench_dims) << "\n";
  out << "timing = " << (timing ? "true" : "false") << "\n";
  out << "oracle-tol = " << io::format_double(oracle_tol) << "\n";
  out << "comparator-tol = " << io::format_double(comparator_tol) << "\n";
  out << "psd-tol = " << io::format_double(tol.psd) << "\n";
  out << "trace-tol = " << io::format_double(tol.trace) << "\n";
  return out.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : config.to_text()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

unsigned worker_threads() {
  if (const char* env = std::getenv("QSB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ReturnVector> random_return_stream(int dim, long rounds, Rng& rng) {
  std::vector<ReturnVector> out;
  out.reserve(static_cast<std::size_t>(rounds));
  RealVector a(dim);
  for (long t = 0; t < rounds; ++t) {
    do {
      for (int i = 0; i < dim; ++i) a(i) = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 2.0);
    } while (a.maxCoeff() <= 0.0);
    out.emplace_back(a);
  }
  return out;
}

std::vector<ObservationMatrix> random_observation_stream(int dim, long rounds, int rank, Rng& rng) {
  std::vector<ObservationMatrix> out;
  out.reserve(static_cast<std::size_t>(rounds));
  for (long t = 0; t < rounds; ++t) {
    out.emplace_back(rank == 1 ? random_rank1_projector(dim, rng) : random_psd(dim, rank, rng));
  }
  return out;
}

void write_ops_transcript(const fs::path& path, const OpsTranscript& tr, int dim) {
  io::CsvWriter csv(path, {"round", "loss", "cum_loss", "comparator_loss", "regret", "bound"});
  double cum = 0.0;
  double cmp = 0.0;
  for (std::size_t t = 0; t < tr.losses.size(); ++t) {
    const long round = static_cast<long>(t) + 1;
    cum += tr.losses[t];
    if (t < tr.comparator_losses.size()) cmp += tr.comparator_losses[t];
    csv.cell(round).cell(tr.losses[t]).cell(cum).cell(cmp).cell(cum - cmp)
        .cell(regret_bound_at(dim, round, tr.eta));
    csv.end_row();
  }
  csv.close();
}

void write_qst_transcript(const fs::path& path, const QstTranscript& tr) {
  io::CsvWriter csv(path,
                    {"round", "loss", "cum_loss", "true_trace", "min_eig_rho", "step_time_ns"});
  double cum = 0.0;
  for (std::size_t t = 0; t < tr.losses.size(); ++t) {
    cum += tr.losses[t];
    csv.cell(static_cast<long>(t) + 1).cell(tr.losses[t]).cell(cum).cell(tr.true_traces[t])
        .cell(tr.min_eigs[t]).cell(static_cast<long long>(tr.step_time_ns[t]));
    csv.end_row();
  }
  csv.close();
}

void write_ml_result(const fs::path& path, const MlResult& res, int dim, double f_star) {
  io::CsvWriter csv(path, {"checkpoint", "t", "f_rho_bar", "bound", "gap_to_oracle"});
  for (std::size_t k = 0; k < res.checkpoints.size(); ++k) {
    const long t = res.checkpoints[k];
    csv.cell(static_cast<long>(k)).cell(t).cell(res.objective_trace[k])
        .cell(regret_bound_at(dim, t, res.eta) / static_cast<double>(t))
        .cell(res.objective_trace[k] - f_star);
    csv.end_row();
  }
  csv.close();
}

namespace {

class SeedError : public Error {
 public:
  SeedError(std::uint64_t seed, const std::string& what)
      : Error("seed " + std::to_string(seed) + ": " + what) {}
};

// Runs fn(seed) for every seed on up to worker_threads() threads and
// returns the results in seed order. The first failure (in seed order) is
// rethrown tagged with its seed.
template <class Result>
std::vector<Result> run_seeds(const std::vector<std::uint64_t>& seeds,
                              const std::function<Result(std::uint64_t)>& fn) {
  std::vector<std::optional<Result>> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        results[i].emplace(fn(seeds[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<unsigned>(worker_threads(), static_cast<unsigned>(seeds.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::vector<Result> out;
  out.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const Error& e) {
        throw SeedError(seeds[i], e.what());
      }
    }
    out.push_back(std::move(*results[i]));
  }
  return out;
}

struct RunContext {
  const ExperimentConfig& cfg;
  std::ostream& log;
  ExperimentOutcome outcome;

  fs::path artifact(const std::string& name) {
    const fs::path p = cfg.out / name;
    outcome.artifacts.push_back(p);
    return p;
  }
};

std::string seed_file(const std::string& stem, std::uint64_t seed, const std::string& ext) {
  return stem + "_seed" + std::to_string(seed) + ext;
}

DensityMatrix pure_state(int dim, std::uint64_t seed) {
  Rng rng(Rng::derive_seed(seed, 1));
  return random_density(dim, 1, rng);
}

std::vector<Povm> random_basis_povms(int dim, std::uint64_t seed) {
  Rng rng(Rng::derive_seed(seed, 2));
  std::vector<Povm> povms;
  for (int b = 0; b <= dim; ++b) {
    const ComplexMatrix u = random_unitary(dim, rng);
    std::vector<HermitianMatrix> elements;
    for (int j = 0; j < dim; ++j) {
      elements.push_back(HermitianMatrix::symmetrized(u.col(j) * u.col(j).adjoint()));
    }
    povms.emplace_back(std::move(elements));
  }
  return povms;
}

Dataset synthetic_dataset(const ExperimentConfig& cfg, int dim, long shots, std::uint64_t seed) {
  const DensityMatrix truth = pure_state(dim, seed);
  const std::vector<Povm> povms = cfg.povm == PovmSpec::PauliBasis
                                      ? pauli_basis_povms(cfg.qubits ? *cfg.qubits : qubits_of(dim))
                                      : random_basis_povms(dim, seed);
  Rng rng(seed);
  return generate_dataset(truth, povms, shots, rng);
}

void run_ops(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<ReturnVector> file_stream;
  if (cfg.povm == PovmSpec::FromFile) file_stream = io::read_returns(cfg.data);

  struct SeedRun {
    OpsTranscript tr;
    int dim;
  };
  auto results = run_seeds<SeedRun>(cfg.seeds, [&](std::uint64_t seed) {
    std::vector<ReturnVector> stream = file_stream;
    if (stream.empty()) {
      Rng rng(seed);
      stream = random_return_stream(cfg.resolved_dim(), cfg.rounds, rng);
    }
    const int dim = stream.front().dim();
    const long rounds = static_cast<long>(stream.size());
    const double eta = cfg.eta ? *cfg.eta : learning_rate(dim, rounds);
    OpsOptions opt;
    opt.comparator_tol = cfg.comparator_tol;
    return SeedRun{run_ops_game(stream, eta, opt), dim};
  });

  io::CsvWriter summary(ctx.artifact("ops_summary.csv"),
                        {"seed", "dim", "rounds", "eta", "cum_loss", "comparator_loss", "regret",
                         "bound", "comparator_gap"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const long rounds = static_cast<long>(r.tr.losses.size());
    write_ops_transcript(ctx.artifact(seed_file("ops", cfg.seeds[i], ".csv")), r.tr, r.dim);
    const double bound = regret_bound_at(r.dim, rounds, r.tr.eta);
    summary.cell(cfg.seeds[i]).cell(r.dim).cell(rounds).cell(r.tr.eta).cell(r.tr.cumulative_loss)
        .cell(r.tr.comparator_loss).cell(r.tr.regret).cell(bound).cell(r.tr.comparator_gap);
    summary.end_row();
    ctx.log << "seed " << cfg.seeds[i] << ": regret " << r.tr.regret << " (bound " << bound
            << ")\n";
  }
  summary.close();
}

void run_qst(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<ObservationMatrix> file_stream;
  if (cfg.povm == PovmSpec::FromFile) {
    file_stream = io::read_dataset(cfg.data, cfg.tol).matrices();
  }

  auto results = run_seeds<QstTranscript>(cfg.seeds, [&](std::uint64_t seed) {
    std::vector<ObservationMatrix> stream;
    if (!file_stream.empty()) {
      stream = file_stream;
    } else if (cfg.povm == PovmSpec::RandomRank1) {
      Rng rng(seed);
      stream = random_observation_stream(cfg.resolved_dim(), cfg.rounds, 1, rng);
    } else {
      stream = synthetic_dataset(cfg, cfg.resolved_dim(), cfg.rounds, seed).matrices();
    }
    const int dim = stream.front().dim();
    const double eta = cfg.eta ? *cfg.eta : learning_rate(dim, static_cast<long>(stream.size()));
    QstOptions opt;
    opt.comparator_tol = cfg.oracle_tol;
    opt.record_timing = cfg.timing;
    return run_qst_game(stream, eta, opt);
  });

  io::CsvWriter summary(ctx.artifact("qst_summary.csv"),
                        {"seed", "dim", "rounds", "eta", "cum_loss", "comparator_loss", "regret",
                         "bound", "final_true_trace", "comparator_gap"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& tr = results[i];
    const int dim = tr.averaged.dim();
    const long rounds = static_cast<long>(tr.losses.size());
    write_qst_transcript(ctx.artifact(seed_file("qst", cfg.seeds[i], ".csv")), tr);
    io::write_matrix(ctx.artifact(seed_file("rho_bar", cfg.seeds[i], ".json")),
                     tr.averaged.hermitian());
    const double bound = regret_bound_at(dim, rounds, tr.eta);
    summary.cell(cfg.seeds[i]).cell(dim).cell(rounds).cell(tr.eta).cell(tr.cumulative_loss)
        .cell(tr.comparator_loss).cell(tr.regret).cell(bound).cell(tr.final_state.true_trace())
        .cell(tr.comparator_gap);
    summary.end_row();
    ctx.log << "seed " << cfg.seeds[i] << ": regret " << tr.regret << " (bound " << bound
            << "), final tr(W) " << tr.final_state.true_trace() << "\n";
  }
  summary.close();
}

void run_ml(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  Dataset data;
  if (cfg.povm == PovmSpec::FromFile) {
    data = io::read_dataset(cfg.data, cfg.tol);
  } else {
    const int dim = cfg.resolved_dim();
    data = synthetic_dataset(cfg, dim, cfg.shots, cfg.data_seed);
    io::write_matrix(ctx.artifact("rho_true.json"), pure_state(dim, cfg.data_seed).hermitian());
    io::write_dataset(ctx.artifact("dataset.json"), data);
  }
  const int dim = data.dim();

  const BatchMlResult oracle = batch_ml_solve(data, cfg.oracle_tol);
  io::write_matrix(ctx.artifact("oracle_rho.json"), oracle.rho.hermitian());
  ctx.log << "oracle: f* = " << io::format_double(oracle.value) << ", gap " << oracle.gap
          << " after " << oracle.iterations << " iterations\n";

  const std::vector<long> marks = cfg.checkpoint_list();
  auto results = run_seeds<MlResult>(cfg.seeds, [&](std::uint64_t seed) {
    return stochastic_qsb(data, cfg.rounds, cfg.eta, seed, marks);
  });

  std::vector<double> mean(marks.size(), 0.0);
  for (std::size_t i = 0; i < results.size(); ++i) {
    write_ml_result(ctx.artifact(seed_file("ml", cfg.seeds[i], ".csv")), results[i], dim,
                    oracle.value);
    io::write_matrix(ctx.artifact(seed_file("rho_bar", cfg.seeds[i], ".json")),
                     results[i].rho_bar.hermitian());
    for (std::size_t k = 0; k < marks.size(); ++k) mean[k] += results[i].objective_trace[k];
  }
  const double eta = results.front().eta;
  io::CsvWriter summary(ctx.artifact("ml_summary.csv"),
                        {"checkpoint", "t", "mean_f_rho_bar", "mean_gap_to_oracle", "bound",
                         "seeds"});
  for (std::size_t k = 0; k < marks.size(); ++k) {
    mean[k] /= static_cast<double>(results.size());
    const double bound = regret_bound_at(dim, marks[k], eta) / static_cast<double>(marks[k]);
    summary.cell(static_cast<long>(k)).cell(marks[k]).cell(mean[k]).cell(mean[k] - oracle.value)
        .cell(bound).cell(static_cast<long>(results.size()));
    summary.end_row();
  }
  summary.close();
  if (!marks.empty()) {
    ctx.log << "mean f(rho_bar_T) - f* = " << mean.back() - oracle.value << " (bound "
            << regret_bound_at(dim, marks.back(), eta) / static_cast<double>(marks.back())
            << ")\n";
  }
}

void run_scaling(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  io::CsvWriter csv(ctx.artifact("scaling.csv"),
                    {"dim", "rounds", "median_step_ns", "ratio_to_previous"});
  double previous = 0.0;
  for (int dim : cfg.bench_dims) {
    Rng rng(Rng::derive_seed(cfg.seeds.front(), static_cast<std::uint64_t>(dim)));
    const auto stream = random_observation_stream(dim, cfg.rounds, 1, rng);
    const double eta = cfg.eta ? *cfg.eta : learning_rate(std::max(dim, 2), cfg.rounds);
    std::vector<std::int64_t> times;
    times.reserve(stream.size());
    QsbState state = qsb_init(dim);
    for (const auto& a : stream) {
      const auto start = std::chrono::steady_clock::now();
      state = qsb_step(state, a, eta);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());
    }
    std::nth_element(times.begin(), times.begin() + static_cast<long>(times.size() / 2), times.end());
    const double median = static_cast<double>(times[times.size() / 2]);
    const double ratio = previous > 0 ? median / previous : 0.0;
    csv.cell(dim).cell(cfg.rounds).cell(median).cell(ratio);
    csv.end_row();
    ctx.log << "D = " << dim << ": median step " << median << " ns";
    if (previous > 0) ctx.log << " (x" << ratio << ")";
    ctx.log << "\n";
    previous = median;
  }
  csv.close();
}

void run_validate(RunContext& ctx) {
  const auto& cfg = ctx.cfg;
  io::CsvWriter csv(ctx.artifact("validate.csv"), {"check", "status", "detail"});
  bool ok = true;
  auto report = [&](const std::string& check, bool pass, const std::string& detail) {
    csv.cell(check).cell(std::string(pass ? "ok" : "fail")).cell(detail);
    csv.end_row();
    ctx.log << (pass ? "ok   " : "FAIL ") << check << (detail.empty() ? "" : ": ") << detail
            << "\n";
    ok = ok && pass;
  };

  json doc;
  try {
    doc = io::read_json(cfg.data);
    report("parse", true, "");
  } catch (const Error& e) {
    report("parse", false, e.what());
    csv.close();
    ctx.outcome.exit_code = 1;
    return;
  }
  const std::string format = doc.value("format", "");
  if (format == "qsb.dataset") {
    try {
      const Dataset d = io::dataset_from_json(doc, cfg.tol);
      report("header", true, "D = " + std::to_string(d.dim()) + ", N = " + std::to_string(d.size()));
      report("observations", true, "all records Hermitian, PSD and nonzero");
      report("provenance", true, d.has_provenance() ? "one record per matrix" : "absent");
      const double f0 = ml_objective(DensityMatrix::maximally_mixed(d.dim()), d);
      report("objective_at_maximally_mixed", std::isfinite(f0), io::format_double(f0));
    } catch (const Error& e) {
      report("dataset", false, e.what());
    }
  } else if (format == "qsb.matrix") {
    try {
      const ComplexMatrix m = io::matrix_from_json(doc);
      const HermitianMatrix h(m, cfg.tol.sym);
      report("hermitian", true, "dim = " + std::to_string(h.dim()));
      validate_density(h, cfg.tol);
      report("density", true, "PSD with unit trace");
    } catch (const Error& e) {
      report("density", false, e.what());
    }
  } else if (format == "qsb.returns") {
    try {
      const auto stream = io::read_returns(cfg.data);
      report("returns", true, "T = " + std::to_string(stream.size()));
    } catch (const Error& e) {
      report("returns", false, e.what());
    }
  } else {
    report("format", false, "unknown format '" + format + "'");
  }
  csv.close();
  if (!ok) ctx.outcome.exit_code = 1;
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, std::ostream& log) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec) throw io::IoError(config.out, "cannot create output directory: " + ec.message());

  RunContext ctx{config, log, {}};
  const auto started = std::chrono::steady_clock::now();
  const std::string started_utc = utc_now();

  io::write_text(ctx.artifact("run.cfg"), config.to_text());
  switch (config.mode) {
    case Mode::OpsGame: run_ops(ctx); break;
    case Mode::QstGame: run_qst(ctx); break;
    case Mode::MlRun: run_ml(ctx); break;
    case Mode::ScalingBench: run_scaling(ctx); break;
    case Mode::Validate: run_validate(ctx); break;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  json artifacts = json::array();
  for (const auto& p : ctx.outcome.artifacts) artifacts.push_back(p.filename().string());
  const json manifest{{"tool", "qsb"},
                      {"version", QSB_VERSION},
                      {"mode", to_string(config.mode)},
                      {"config", config.to_text()},
                      {"config_hash", config_hash(config)},
                      {"rng", kRngName},
                      {"seeds", config.seeds},
                      {"data_seed", config.data_seed},
                      {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                            std::to_string(EIGEN_MINOR_VERSION)},
                      {"compiler", __VERSION__},
                      {"started_utc", started_utc},
                      {"wall_clock_seconds", seconds},
                      {"exit_code", ctx.outcome.exit_code},
                      {"artifacts", artifacts}};
  const fs::path manifest_path = config.out / "manifest.json";
  io::write_text(manifest_path, manifest.dump(2) + "\n");
  ctx.outcome.artifacts.push_back(manifest_path);
  return ctx.outcome;
}

}  // namespace qsb
