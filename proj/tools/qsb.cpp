// qsb: command line front end for the Q-Soft-Bayes experiments.
//
//   qsb <ops-game|qst-game|ml-run|scaling-bench|validate> [flags]
//   qsb --config run.cfg [flags]
//
// A config file holds `key = value` lines named after the long flags (plus
// `mode`); flags given on the command line win over file values.
// Exit status: 0 success, 1 numerical/validation failure, 2 usage error.

#include "qsb/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Q-Soft-Bayes maximum-likelihood tomography experiments", "qsb"};
  app.set_config("--config", "", "key = value configuration file");
  app.fallthrough();

  qsb::ExperimentConfig cfg;
  std::string mode;
  std::string povm = "pauli-basis";
  std::string out = cfg.out.string();
  std::string data;
  int qubits = 0;
  int dim = 0;
  double eta = 0.0;

  app.add_option("--mode", mode, "ops-game | qst-game | ml-run | scaling-bench | validate");
  auto* q_opt = app.add_option("--qubits,-q", qubits, "number of qubits (D = 2^q)");
  auto* d_opt = app.add_option("--dim,-d", dim, "dimension D");
  app.add_option("--povm", povm, "pauli-basis | random-rank1 | from-file")->capture_default_str();
  app.add_option("--shots,-N", cfg.shots, "measurement records in the data set")
      ->capture_default_str();
  app.add_option("--rounds,-T", cfg.rounds, "rounds / iterations")->capture_default_str();
  auto* eta_opt = app.add_option("--eta", eta, "learning rate (default: tuned to D and T)");
  app.add_option("--seeds", cfg.seeds, "comma separated seeds")->delimiter(',')
      ->capture_default_str();
  app.add_option("--data-seed", cfg.data_seed, "seed of the synthetic data set")
      ->capture_default_str();
  app.add_option("--checkpoints", cfg.checkpoints, "'geometric', 'none' or comma separated rounds")
      ->capture_default_str();
  app.add_option("--out,-o", out, "output directory")->capture_default_str();
  app.add_option("--data", data, "input file (from-file / validate)");
  app.add_option("--bench-dims", cfg.bench_dims, "dimensions for scaling-bench")->delimiter(',')
      ->capture_default_str();
  app.add_flag("--timing", cfg.timing, "record per-step times in qst-game transcripts");
  app.add_option("--oracle-tol", cfg.oracle_tol, "batch ML gap certificate")
      ->capture_default_str();
  app.add_option("--comparator-tol", cfg.comparator_tol, "best fixed portfolio gap certificate")
      ->capture_default_str();
  app.add_option("--psd-tol", cfg.tol.psd, "PSD tolerance")->capture_default_str();
  app.add_option("--trace-tol", cfg.tol.trace, "trace tolerance")->capture_default_str();

  for (const char* name : {"ops-game", "qst-game", "ml-run", "scaling-bench", "validate"}) {
    app.add_subcommand(name, std::string("run ") + name)->fallthrough();
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto subs = app.get_subcommands();
    if (!subs.empty()) {
      mode = subs.front()->get_name();
    }
    if (mode.empty()) throw qsb::ConfigError("no mode given (subcommand or `mode = ...`)");
    cfg.mode = qsb::parse_mode(mode);
    cfg.povm = qsb::parse_povm(povm);
    if (q_opt->count() > 0) cfg.qubits = qubits;
    if (d_opt->count() > 0) cfg.dim = dim;
    if (eta_opt->count() > 0) cfg.eta = eta;
    cfg.out = out;
    cfg.data = data;
    const auto result = qsb::run_experiment(cfg, std::cerr);
    return result.exit_code;
  } catch (const qsb::ConfigError& e) {
    std::cerr << "qsb: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qsb: error: " << e.what() << "\n";
    return 1;
  }
}
