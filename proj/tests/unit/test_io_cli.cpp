#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qsb/errors.hpp"
#include "qsb/experiment.hpp"
#include "qsb/io.hpp"
#include "qsb/random.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace qsb;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qsb-unit-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Every artifact except the manifest (wall clock, timestamps).
void check_same_outputs(const fs::path& a, const fs::path& b) {
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "manifest.json") continue;
    REQUIRE(fs::exists(b / name));
    CHECK_MESSAGE(slurp(entry.path()) == slurp(b / name), name.string());
    ++compared;
  }
  CHECK(compared > 0);
}

ExperimentConfig small(Mode mode, const fs::path& out) {
  ExperimentConfig cfg;
  cfg.mode = mode;
  cfg.qubits = 1;
  cfg.shots = 120;
  cfg.rounds = 64;
  cfg.seeds = {1, 2, 3};
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  Rng rng(4);
  for (int k = 0; k < 1000; ++k) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-300, 300));
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("matrix JSON round trip") {
  Rng rng(6);
  const fs::path dir = scratch_dir("matrix");
  for (int dim : {1, 2, 5}) {
    const auto h = random_hermitian(dim, rng);
    io::write_matrix(dir / "m.json", h);
    const auto back = io::read_matrix(dir / "m.json");
    CHECK(back.matrix() == h.matrix());
  }
  SUBCASE("malformed records") {
    using nlohmann::json;
    CHECK_THROWS_AS(io::matrix_from_json(json{{"dim", 2}, {"entries", json::array()}}), Error);
    CHECK_THROWS_AS(io::matrix_from_json(json{{"entries", json::array()}}), Error);
    CHECK_THROWS_AS(
        io::matrix_from_json(json{{"dim", 1}, {"entries", json::array({json::array({1})})}}), Error);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(io::read_matrix(dir / "bad.json"), Error);
    CHECK_THROWS_AS(io::read_matrix(dir / "missing.json"), Error);
    // Valid JSON, non-Hermitian content.
    const json nh{{"format", "qsb.matrix"},
                  {"dim", 2},
                  {"entries", json::array({json::array({1, 0}), json::array({2, 0}),
                                           json::array({0, 0}), json::array({1, 0})})}};
    std::ofstream(dir / "nh.json") << nh.dump();
    CHECK_THROWS_WITH_AS(io::read_matrix(dir / "nh.json"),
                         doctest::Contains("not Hermitian"), io::IoError);
  }
}

TEST_CASE("dataset and returns round trip") {
  const fs::path dir = scratch_dir("dataset");
  Rng rng(12);
  const auto rho = random_density(4, 1, rng);
  const auto povms = pauli_basis_povms(2);
  const auto ds = generate_dataset(rho, povms, 200, rng);
  io::write_dataset(dir / "d.json", ds);
  const auto back = io::read_dataset(dir / "d.json");
  REQUIRE(back.size() == ds.size());
  CHECK(back.provenance() == ds.provenance());
  for (std::size_t n = 0; n < ds.size(); ++n) CHECK(back.matrices()[n].matrix() == ds.matrices()[n].matrix());
  CHECK(ml_objective(rho, back) == ml_objective(rho, ds));

  const Dataset plain(std::vector<ObservationMatrix>(3, ObservationMatrix(HermitianMatrix::identity(2))));
  io::write_dataset(dir / "p.json", plain);
  CHECK_FALSE(io::read_dataset(dir / "p.json").has_provenance());

  std::vector<ReturnVector> stream;
  for (int t = 0; t < 20; ++t) stream.emplace_back(RealVector::Random(3).cwiseAbs() + RealVector::Constant(3, 1e-3));
  io::write_returns(dir / "r.json", stream);
  const auto rs = io::read_returns(dir / "r.json");
  REQUIRE(rs.size() == 20);
  for (int t = 0; t < 20; ++t) CHECK(rs[static_cast<std::size_t>(t)].rates() == stream[static_cast<std::size_t>(t)].rates());

  // A dataset file is not a returns file.
  CHECK_THROWS_AS(io::read_returns(dir / "d.json"), Error);
}

TEST_CASE("CSV tables") {
  const fs::path dir = scratch_dir("csv");
  SUBCASE("empty checkpoint list gives a header-only table") {
    MlResult res;
    res.rho_bar = DensityMatrix::maximally_mixed(2);
    res.eta = 0.1;
    res.rounds = 10;
    write_ml_result(dir / "ml.csv", res, 2, 0.0);
    const auto l = lines(dir / "ml.csv");
    REQUIRE(l.size() == 1);
    CHECK(l[0] == "checkpoint,t,f_rho_bar,bound,gap_to_oracle");
  }
  SUBCASE("one row per round in a game transcript") {
    Rng rng(1);
    const auto stream = random_return_stream(3, 25, rng);
    const auto tr = run_ops_game(stream, learning_rate(3, 25));
    write_ops_transcript(dir / "ops.csv", tr, 3);
    const auto l = lines(dir / "ops.csv");
    REQUIRE(l.size() == 26);
    CHECK(l[0] == "round,loss,cum_loss,comparator_loss,regret,bound");
    CHECK(l[1].rfind("1,", 0) == 0);
    CHECK(l[25].rfind("25,", 0) == 0);
  }
  SUBCASE("qst transcript columns") {
    Rng rng(1);
    const auto stream = random_observation_stream(2, 10, 1, rng);
    const auto tr = run_qst_game(stream, 0.2, {.record_timing = false});
    write_qst_transcript(dir / "qst.csv", tr);
    const auto l = lines(dir / "qst.csv");
    REQUIRE(l.size() == 11);
    CHECK(l[0] == "round,loss,cum_loss,true_trace,min_eig_rho,step_time_ns");
    CHECK(l[10].substr(l[10].rfind(',') + 1) == "0");
  }
}

TEST_CASE("configuration") {
  ExperimentConfig cfg;
  cfg.mode = Mode::MlRun;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // no dimension
  cfg.qubits = 2;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.resolved_dim() == 4);
  cfg.dim = 8;
  CHECK_THROWS_AS(cfg.resolved_dim(), ConfigError);
  cfg.dim.reset();

  cfg.eta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.eta.reset();
  cfg.checkpoints = "1,x";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.checkpoints = "1,5000";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.checkpoints = "1,10,100";
  CHECK(cfg.checkpoint_list() == std::vector<long>{1, 10, 100});
  cfg.checkpoints = "none";
  CHECK(cfg.checkpoint_list().empty());
  cfg.checkpoints = "geometric";
  cfg.seeds.clear();
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.seeds = {1};

  ExperimentConfig odd;
  odd.mode = Mode::QstGame;
  odd.dim = 3;
  odd.povm = PovmSpec::PauliBasis;
  CHECK_THROWS_AS(odd.validate(), ConfigError);
  odd.povm = PovmSpec::RandomRank1;
  CHECK_NOTHROW(odd.validate());

  CHECK_THROWS_AS(parse_mode("bogus"), ConfigError);
  CHECK(parse_mode("ml-run") == Mode::MlRun);
  CHECK(parse_povm(to_string(PovmSpec::RandomRank1)) == PovmSpec::RandomRank1);

  ExperimentConfig a = cfg;
  ExperimentConfig b = cfg;
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.rounds += 1;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.out = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("run_experiment is deterministic for every seeded mode") {
  std::ostringstream log;
  for (Mode mode : {Mode::OpsGame, Mode::QstGame, Mode::MlRun}) {
    const auto name = to_string(mode);
    const fs::path a = scratch_dir(name + "-a");
    const fs::path b = scratch_dir(name + "-b");
    auto cfg = small(mode, a);
    if (mode == Mode::QstGame) cfg.povm = PovmSpec::RandomRank1;
    const auto ra = run_experiment(cfg, log);
    cfg.out = b;
    const auto rb = run_experiment(cfg, log);
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    CHECK(fs::exists(a / "manifest.json"));
    CHECK(fs::exists(a / "run.cfg"));
    check_same_outputs(a, b);

    const auto manifest = io::read_json(a / "manifest.json");
    CHECK(manifest.at("mode") == name);
    CHECK(manifest.at("config_hash") == config_hash(cfg));
    CHECK(manifest.at("seeds").size() == 3);
  }
}

TEST_CASE("ml-run artifacts") {
  std::ostringstream log;
  const fs::path dir = scratch_dir("ml-artifacts");
  auto cfg = small(Mode::MlRun, dir);
  cfg.seeds = {7};
  run_experiment(cfg, log);
  for (const char* f : {"rho_true.json", "dataset.json", "oracle_rho.json", "ml_seed7.csv",
                        "rho_bar_seed7.json", "ml_summary.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  const auto rows = lines(dir / "ml_seed7.csv");
  CHECK(rows.size() == 1 + geometric_checkpoints(64).size());
  const auto rho_bar = io::read_matrix(dir / "rho_bar_seed7.json");
  CHECK(rho_bar.trace() == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("validate accepts the generated data set and rejects a broken one") {
    ExperimentConfig v;
    v.mode = Mode::Validate;
    v.data = dir / "dataset.json";
    v.out = scratch_dir("validate-ok");
    CHECK(run_experiment(v, log).exit_code == 0);

    auto j = io::read_json(dir / "dataset.json");
    j["matrices"][0]["entries"][0][0] = -5.0;
    const fs::path broken = scratch_dir("validate-bad") / "broken.json";
    io::write_text(broken, j.dump());
    v.data = broken;
    v.out = broken.parent_path() / "out";
    CHECK(run_experiment(v, log).exit_code == 1);
  }
}

TEST_CASE("scaling-bench writes one row per dimension") {
  std::ostringstream log;
  const fs::path dir = scratch_dir("bench");
  ExperimentConfig cfg;
  cfg.mode = Mode::ScalingBench;
  cfg.bench_dims = {2, 4};
  cfg.rounds = 20;
  cfg.out = dir;
  CHECK(run_experiment(cfg, log).exit_code == 0);
  const auto rows = lines(dir / "scaling.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "dim,rounds,median_step_ns,ratio_to_previous");
}
