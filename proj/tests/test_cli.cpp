#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "qwalk/commands.hpp"
#include "qwalk/config.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/walk.hpp"
#include "qwalk/writers.hpp"

using namespace qwalk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("qwalk_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSmall = R"({
  "lattice": {"L": 64, "lambda": 4, "theta0": 0.4},
  "initial": {"kind": "gaussian_real", "sigma_sq": 10, "center": 0},
  "nonlinearity": {"kappa": 1.4},
  "run": {"steps": 50, "record_every": 10, "stride": 25, "observables": ["density", "m_z", "final_state"]}
})";

std::string config_error_field(const std::string& text) {
  try {
    config::parse(text);
  } catch (const config::ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QWALK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(-2.5e-300) == "-2.5e-300");
  CHECK(io::format_double(NAN) == "nan");
  CHECK(io::format_double(-INFINITY) == "-inf");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng);
    CHECK(std::stod(io::format_double(x)) == x);
  }
}

TEST_CASE("config parses a complete document") {
  const config::Document doc = config::parse(kSmall);
  const auto& p = std::get<TwoWallParams>(doc.run.profile);
  CHECK(p.sites == 64);
  CHECK(doc.run.initial.sigma == doctest::Approx(std::sqrt(10.0)));
  CHECK(doc.run.nonlinearity.kappa == 1.4);
  CHECK(doc.run.steps == 50);
  CHECK(doc.run.observables.density);
  CHECK(doc.run.observables.m_z);
  CHECK(doc.warnings.size() == 0);
  // the resolved document reparses to the same run
  const config::Document again = config::parse_json(doc.resolved);
  CHECK(again.resolved == doc.resolved);
}

TEST_CASE("config defaults and variants") {
  const config::Document a = config::parse(R"({"lattice":{"L":40,"lambda":2,"theta0":0.3},"run":{"steps":1}})");
  CHECK(a.run.nonlinearity.kappa == 0.0);
  CHECK(a.run.initial.kind == InitialKind::GaussianReal);
  CHECK(a.warnings.empty());
}

TEST_CASE("config field-level errors") {
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{"steps":1},"extra":1})") == "extra");
  CHECK(config_error_field(R"({"lattice":{"L":63,"lambda":4,"theta0":0.4},"run":{"steps":1}})") == "lattice.L");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":-1,"theta0":0.4},"run":{"steps":1}})") == "lattice.lambda");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":2},"run":{"steps":1}})") == "lattice.theta0");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4}})") == "run");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{}})") == "run.steps");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{"steps":-1}})") == "run.steps");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{"steps":1,"stride":0}})") == "run.stride");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{"steps":1,"observables":["x"]}})") ==
        "run.observables");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"initial":{"kind":"box"},"run":{"steps":1}})") ==
        "initial.kind");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"initial":{"sigma_sq":0},"run":{"steps":1}})") ==
        "initial.sigma_sq");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"initial":{"sigma":1,"center":32},"run":{"steps":1}})") ==
        "initial.center");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"nonlinearity":{"kappa":1,"ordering":"zigzag"},"run":{"steps":1}})") ==
        "nonlinearity.ordering");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"nonlinearity":{"kappa_tilde":1,"n_hat":[1,0,0]},"run":{"steps":1}})") ==
        "nonlinearity.n_hat");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"nonlinearity":{"n_hat":[0,1,0]},"run":{"steps":1}})") ==
        "nonlinearity.n_hat");
  CHECK(config_error_field(R"({"lattice":{"theta":[0.1,0.2,0.3]},"run":{"steps":1}})") == "lattice.theta");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{"steps":1},"sweep":{}})") == "sweep");
  CHECK(config_error_field(R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"run":{"steps":1},"sweep":{"kappa":[1]}})") ==
        "sweep.kappa");
}

TEST_CASE("config syntax errors carry the line") {
  try {
    config::parse("{\n  \"lattice\": {\n    \"L\": 64,\n  }\n}");
    FAIL("expected a ConfigError");
  } catch (const config::ConfigError& e) {
    REQUIRE(e.line().has_value());
    CHECK(*e.line() == 4);
  }
}

TEST_CASE("crowded walls produce a warning") {
  const config::Document d = config::parse(R"({"lattice":{"L":40,"lambda":8,"theta0":0.3},"run":{"steps":1}})");
  CHECK(d.warnings.size() == 1);
}

TEST_CASE("generalized nonlinearity in the config") {
  const config::Document d = config::parse(
      R"({"lattice":{"L":64,"lambda":4,"theta0":0.4},"nonlinearity":{"kappa_tilde":2,"n_hat":[0,0.6,0.8],"m_hat":[0,0,1],"ordering":"galton_board"},"run":{"steps":1}})");
  CHECK(d.run.nonlinearity.kappa == 2.0);
  CHECK(d.run.nonlinearity.rotation_axis == Vec3{0.0, 0.6, 0.8});
  CHECK(d.run.nonlinearity.ordering == Ordering::GaltonBoard);
}

TEST_CASE("sweep expansion") {
  const json base = json::parse(kSmall);
  std::vector<config::SweepAxis> axes{{"nonlinearity.kappa", {-1.4, 0.0, 1.4}},
                                      {"nonlinearity.ordering", {"symmetrized", "galton_board"}}};
  const auto grid = config::expand_sweep(base, axes);
  REQUIRE(grid.size() == 6);
  CHECK(grid[0]["nonlinearity"]["kappa"] == -1.4);
  CHECK(grid[1]["nonlinearity"]["ordering"] == "galton_board");
  CHECK(grid[5]["nonlinearity"]["kappa"] == 1.4);
  CHECK_FALSE(grid[0].contains("sweep"));
}

TEST_CASE("output directory resolution") {
  const config::OutputSpec spec{"from_config"};
  CHECK(config::resolve_output_dir(fs::path("cli"), spec, "x") == fs::path("cli"));
  CHECK(config::resolve_output_dir(std::nullopt, spec, "x") == fs::path("from_config"));
  ::setenv(config::kOutputDirEnv, "/tmp/envdir", 1);
  CHECK(config::resolve_output_dir(std::nullopt, {}, "x") == fs::path("/tmp/envdir/x"));
  ::unsetenv(config::kOutputDirEnv);
  CHECK(config::resolve_output_dir(std::nullopt, {}, "x") == fs::path("x"));
}

TEST_CASE("state csv round trip") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  SpinorField f(10);
  for (std::size_t i = 0; i < 10; ++i) f.set(i, {g(rng), g(rng)}, {g(rng), g(rng)});
  std::stringstream s;
  io::write_state_csv(s, f);
  CHECK(io::read_state_csv(s) == f);

  std::stringstream bad("x,u_re,u_im,v_re,v_im\n0,1,2,3\n");
  CHECK_THROWS_AS(io::read_state_csv(bad), ValidationError);
  std::stringstream wrong_x("x,u_re,u_im,v_re,v_im\n0,1,0,0,0\n1,0,0,0,0\n");
  CHECK_THROWS_AS(io::read_state_csv(wrong_x), ValidationError);
}

TEST_CASE("unnormalized custom state is flagged") {
  TempDir tmp;
  SpinorField f(64);
  f.set(10, 2.0, 0.0);
  {
    std::ofstream out(tmp.path / "s.csv");
    io::write_state_csv(out, f);
  }
  json doc = json::parse(kSmall);
  doc["initial"] = {{"kind", "custom"}, {"state_file", "s.csv"}};
  const config::Document d = config::parse(doc.dump(), tmp.path);
  REQUIRE(d.warnings.size() == 1);
  CHECK(d.warnings[0].find("renormalized") != std::string::npos);

  f.set(10, 1.0, 0.0);
  {
    std::ofstream out(tmp.path / "s.csv");
    io::write_state_csv(out, f);
  }
  CHECK(config::parse(doc.dump(), tmp.path).warnings.empty());
}

TEST_CASE("csv and ndjson writers") {
  std::stringstream csv, nd;
  io::ObservableCsvWriter w(csv);
  io::SnapshotNdjsonWriter s(nd);
  ObservableRecord r;
  r.t = 3;
  r.norm = 1.0;
  r.sx_expect = 0.5;
  r.overlap_plus = 0.25;
  r.overlap_minus = 0.125;
  r.center_of_mass = -2.0;
  r.peak_site = -4;
  w.write(r);
  s.write(r);  // skipped: no per-site data
  r.density = std::vector<double>{0.5, 0.5};
  s.write(r);
  CHECK(csv.str() == "t,norm,sx_expect,overlap_plus,overlap_minus,com,peak_site\n3,1,0.5,0.25,0.125,-2,-4\n");
  const json line = json::parse(nd.str());
  CHECK(line["t"] == 3);
  CHECK(line["density"].size() == 2);
  CHECK_FALSE(line.contains("m_z"));
}

TEST_CASE("evolve command writes a bundle and is deterministic") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", kSmall);
  std::ostringstream log;
  REQUIRE(cli::cmd_evolve({tmp.path / "cfg.json", tmp.path / "a"}, log) == cli::kOk);
  REQUIRE(cli::cmd_evolve({tmp.path / "cfg.json", tmp.path / "b"}, log) == cli::kOk);
  for (const char* f : {"observables.csv", "snapshots.ndjson", "final_state.csv", "config.json"}) {
    CAPTURE(f);
    CHECK(read_file(tmp.path / "a" / f) == read_file(tmp.path / "b" / f));
  }
  const std::string obs = read_file(tmp.path / "a" / "observables.csv");
  // header + t = 0, 10, ..., 50 plus the snapshot step t = 25
  CHECK(std::count(obs.begin(), obs.end(), '\n') == 8);
  const json manifest = json::parse(read_file(tmp.path / "a" / "manifest.json"));
  CHECK(manifest["version"].is_string());
  CHECK(manifest["kernel_isa"].is_string());
  CHECK(manifest["final"]["t"] == 50);
  CHECK(manifest["walls"]["plus"]["x"] == 16);
  CHECK(manifest["zero_mode_residuals"]["plus"].get<double>() < 1e-8);

  std::ifstream nd(tmp.path / "a" / "snapshots.ndjson");
  std::string line;
  std::vector<std::size_t> ts;
  while (std::getline(nd, line)) {
    const json j = json::parse(line);
    CHECK(j["density"].size() == 64);
    CHECK(j["m_z"].size() == 64);
    ts.push_back(j["t"]);
  }
  CHECK(ts == std::vector<std::size_t>{0, 25, 50});

  // rerunning the echoed config reproduces the observables bit for bit
  REQUIRE(cli::cmd_evolve({tmp.path / "a" / "config.json", tmp.path / "c"}, log) == cli::kOk);
  CHECK(read_file(tmp.path / "c" / "observables.csv") == obs);
}

TEST_CASE("final state reloaded and evolved zero steps equals itself") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", kSmall);
  std::ostringstream log;
  REQUIRE(cli::cmd_evolve({tmp.path / "cfg.json", tmp.path / "a"}, log) == cli::kOk);
  json custom = json::parse(kSmall);
  custom["initial"] = {{"kind", "custom"}, {"state_file", "a/final_state.csv"}};
  custom["run"]["steps"] = 0;
  write_file(tmp.path / "reload.json", custom.dump());
  REQUIRE(cli::cmd_evolve({tmp.path / "reload.json", tmp.path / "b"}, log) == cli::kOk);
  CHECK(read_file(tmp.path / "b" / "final_state.csv") == read_file(tmp.path / "a" / "final_state.csv"));
}

TEST_CASE("evolve command exit codes") {
  TempDir tmp;
  std::ostringstream log;
  write_file(tmp.path / "bad.json", "{\"lattice\": {\"L\": 63, \"lambda\": 4, \"theta0\": 0.4}, \"run\": {\"steps\": 1}}");
  CHECK(cli::cmd_evolve({tmp.path / "bad.json", tmp.path / "o"}, log) == cli::kConfigError);
  CHECK(log.str().find("lattice.L") != std::string::npos);
  CHECK(cli::cmd_evolve({tmp.path / "missing.json", tmp.path / "o"}, log) == cli::kConfigError);
  json with_sweep = json::parse(kSmall);
  with_sweep["sweep"] = {{"nonlinearity.kappa", {1.0}}};
  write_file(tmp.path / "sw.json", with_sweep.dump());
  CHECK(cli::cmd_evolve({tmp.path / "sw.json", tmp.path / "o"}, log) == cli::kConfigError);
}

TEST_CASE("zero-mode command") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", R"({"lattice":{"L":500,"lambda":10,"theta0":0.4}})");
  std::ostringstream log;
  cli::ZeroModeOptions opts;
  opts.config = tmp.path / "cfg.json";
  opts.output_dir = tmp.path / "plus";
  REQUIRE(cli::cmd_zero_mode(opts, log) == cli::kOk);
  const json m = json::parse(read_file(tmp.path / "plus" / "manifest.json"));
  CHECK(m["residual"].get<double>() < 1e-8);
  CHECK(m["overlap_continuum"].get<double>() > 0.99);
  CHECK(m["chirality"] == 1);
  const std::string csv = read_file(tmp.path / "plus" / "zero_mode.csv");
  CHECK(csv.rfind("x,theta,u_lattice,v_lattice,u_continuum,v_continuum\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 501);

  opts.chirality = -1;
  opts.output_dir = tmp.path / "wrong";
  CHECK(cli::cmd_zero_mode(opts, log) == cli::kConstructionError);

  write_file(tmp.path / "flat.json", R"({"lattice":{"L":100,"lambda":10,"theta0":0}})");
  cli::ZeroModeOptions flat;
  flat.config = tmp.path / "flat.json";
  flat.wall = "0";
  flat.output_dir = tmp.path / "flat";
  REQUIRE(cli::cmd_zero_mode(flat, log) == cli::kOk);
  const json fm = json::parse(read_file(tmp.path / "flat" / "manifest.json"));
  CHECK(fm["residual"].get<double>() < 1e-14);

  flat.wall = "plus";
  CHECK(cli::cmd_zero_mode(flat, log) == cli::kConstructionError);
}

TEST_CASE("stability command") {
  cli::StabilityOptions opts;
  cli::parse_k_range("0:2:5", opts);
  CHECK(opts.k_count == 5);
  CHECK_THROWS_AS(cli::parse_k_range("0:2", opts), ValidationError);
  CHECK_THROWS_AS(cli::parse_k_range("0:x:2", opts), ValidationError);
  opts.theta = 0.3;
  opts.kappa = 1.4;
  opts.u_sq = 0.05;
  opts.verify = true;
  std::ostringstream out, log;
  REQUIRE(cli::cmd_stability(opts, out, log) == cli::kOk);
  std::istringstream rows(out.str());
  std::string line;
  std::getline(rows, line);
  CHECK(line ==
        "k,mu1_re,mu1_im,mu2_re,mu2_im,mu3_re,mu3_im,mu4_re,mu4_im,delta_re,delta_im,classification,"
        "eig_deviation");
  int n = 0;
  while (std::getline(rows, line)) {
    ++n;
    CHECK(line.find(",attractor,") != std::string::npos);
  }
  CHECK(n == 5);

  opts.kappa = 0.0;
  std::ostringstream zero;
  REQUIRE(cli::cmd_stability(opts, zero, log) == cli::kOk);
  CHECK(zero.str().find("neutral") != std::string::npos);

  opts.kappa.reset();
  CHECK(cli::cmd_stability(opts, zero, log) == cli::kConfigError);
  opts.kappa_tilde = 2.0;
  opts.n_hat = {0.0, 0.6, 0.8};
  REQUIRE(cli::cmd_stability(opts, zero, log) == cli::kOk);
}

TEST_CASE("uniform-map command") {
  cli::UniformMapOptions opts;
  opts.theta = 0.2;
  opts.kappa = 0.3;
  opts.seeds = 20;
  std::ostringstream out, log;
  REQUIRE(cli::cmd_uniform_map(opts, out, log) == cli::kOk);
  CHECK(out.str().rfind("alpha,multiplier,kind,invertible\n", 0) == 0);
  CHECK(log.str().find("20 of 20 seeds converged") != std::string::npos);
  opts.kappa = 0.0;
  CHECK(cli::cmd_uniform_map(opts, out, log) == cli::kConfigError);
}

TEST_CASE("sweep command") {
  TempDir tmp;
  json cfg = json::parse(kSmall);
  cfg["sweep"] = {{"nonlinearity.kappa", {-1.4, 0.0, 1.4}}};
  write_file(tmp.path / "sw.json", cfg.dump());
  std::ostringstream log;
  REQUIRE(cli::cmd_sweep({tmp.path / "sw.json", tmp.path / "out", 2}, log) == cli::kOk);
  for (const char* d : {"run_000", "run_001", "run_002"}) CHECK(fs::exists(tmp.path / "out" / d / "manifest.json"));
  const std::string summary = read_file(tmp.path / "out" / "summary.csv");
  CHECK(summary.rfind("run,nonlinearity.kappa,status,exit_code,", 0) == 0);
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);

  // parallel and sequential sweeps write identical data
  REQUIRE(cli::cmd_sweep({tmp.path / "sw.json", tmp.path / "seq", 1}, log) == cli::kOk);
  CHECK(read_file(tmp.path / "seq" / "run_002" / "observables.csv") ==
        read_file(tmp.path / "out" / "run_002" / "observables.csv"));

  // one bad grid point fails that run only
  cfg["sweep"] = {{"lattice.theta0", {0.4, 3.0}}};
  write_file(tmp.path / "partial.json", cfg.dump());
  CHECK(cli::cmd_sweep({tmp.path / "partial.json", tmp.path / "partial", 1}, log) == cli::kConfigError);
  const std::string partial = read_file(tmp.path / "partial" / "summary.csv");
  CHECK(partial.find("run_000,0.4,ok") != std::string::npos);
  CHECK(partial.find("run_001,3.0,failed,2") != std::string::npos);

  cfg["sweep"] = json::object();
  write_file(tmp.path / "empty.json", cfg.dump());
  CHECK(cli::cmd_sweep({tmp.path / "empty.json", tmp.path / "e", 1}, log) == cli::kConfigError);
}

TEST_CASE("executable exit codes") {
  TempDir tmp;
  write_file(tmp.path / "cfg.json", kSmall);
  write_file(tmp.path / "bad.json", "{ not json");
  write_file(tmp.path / "zm.json", R"({"lattice":{"L":500,"lambda":10,"theta0":0.4}})");
  const std::string out = " -o " + (tmp.path / "o").string();
  CHECK(run_cli("evolve " + (tmp.path / "cfg.json").string() + out) == 0);
  CHECK(run_cli("--isa scalar evolve " + (tmp.path / "cfg.json").string() + out) == 0);
  CHECK(run_cli("evolve " + (tmp.path / "bad.json").string() + out) == 2);
  CHECK(run_cli("zero-mode " + (tmp.path / "zm.json").string() + " --chirality -1" + out) == 4);
  CHECK(run_cli("stability --k-range 0:1:3 --theta 0.1 --kappa 1 --u-sq 0.1 --verify") == 0);
  CHECK(run_cli("uniform-map --theta 0.2 --kappa 0.3") == 0);
  CHECK(run_cli("no-such-command") == 2);
}
