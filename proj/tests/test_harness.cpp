#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnls/checkpoint.hpp"
#include "dnls/config.hpp"
#include "dnls/errors.hpp"
#include "dnls/experiments.hpp"
#include "doctest.h"

using namespace dnls;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("dnls_harness_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Trajectory small_trajectory(std::size_t n) {
  auto g = make_grid(n, 10.0, 0.5);
  Trajectory t;
  t.grid = g;
  for (int k = 0; k < 3; ++k) {
    t.times.push_back(0.1 * k);
    t.snapshots.push_back(ComplexField::from_function(g, [k](double x) {
      return cplx(std::exp(-x * x) / (k + 1), std::sin(x) * 1e-300 + 1.0 / 3.0);
    }));
  }
  return t;
}

}  // namespace

TEST_CASE("minimal soliton config gets the defaults") {
  const auto c = parse_config("experiment = soliton_check\n");
  CHECK(c.epsilon == 0.01);
  CHECK(c.sim.dealias);
  CHECK(c.background == BackgroundChoice::dark_soliton);
  CHECK(c.n_points == 4096);
  CHECK(c.box_length == 80.0);
  CHECK(c.sim.dt == 2.5e-4);
  CHECK(c.output_name == "soliton_check");
}

TEST_CASE("schema violations carry the key") {
  CHECK(any_contains(violations_of("experiment = conservation\nn_points = 100\n"),
                     "n_points must be a power of two"));
  const auto unknown = violations_of("experiment = solitons\n");
  REQUIRE(unknown.size() == 1);
  for (const auto& n : experiment_names()) CHECK(unknown[0].find(n) != std::string::npos);
  CHECK(any_contains(violations_of("n_points = 64\n"), "experiment: missing required key"));

  const auto many = violations_of(
      "experiment = conservation\nfoo = 1\ndt = fast\ndealias = yes\nlambda = 1\nlambda = 2\nnonsense line\n");
  CHECK(any_contains(many, "foo: unknown key"));
  CHECK(any_contains(many, "dt: expected a real number, got 'fast'"));
  CHECK(any_contains(many, "dealias: expected true or false"));
  CHECK(any_contains(many, "lambda: duplicate key"));
  CHECK(any_contains(many, "line 7: expected 'key = value'"));

  CHECK(any_contains(violations_of("experiment = plane_wave\ndatum_wavenumber = 2.5\n"), "datum_wavenumber"));
  CHECK(any_contains(violations_of("experiment = conservation\nbackground = dark_soliton\n"), "background"));
  CHECK(any_contains(violations_of("experiment = convergence\ndt_list = [1e-3, 2e-3]\n"), "dt_list"));
  CHECK(any_contains(violations_of("experiment = difference\ndifference_norm = l2\n"), "valid values"));
  CHECK(any_contains(violations_of("experiment = coercivity\nn0 = 3\n"), "n0 must be auto or a power of two"));
}

TEST_CASE("comments, whitespace and the echo round trip") {
  const auto c = parse_config(
      "# header\n  experiment=coercivity  # trailing\n\nc1 = 0.5\nn0 = 8\nbackground_constant = [1, -2]\n");
  CHECK(c.c1 == 0.5);
  CHECK_FALSE(c.c2.has_value());
  CHECK(c.n0_exponent == 3);
  CHECK(c.background_constant == cplx(1, -2));
  std::string text;
  for (const auto& [k, v] : config_echo(c)) text += k + " = " + v + "\n";
  const auto again = parse_config(text);
  CHECK(config_echo(again) == config_echo(c));
}

TEST_CASE("preflight catches CFL and modified-energy ranges") {
  auto cfg = parse_config("experiment = conservation\ndt = 0.1\n");
  try {
    preflight(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(any_contains(e.violations(), "dt"));
  }
  auto co = parse_config("experiment = coercivity\ns = 0.78\n");
  CHECK_THROWS_AS(preflight(co), ConfigError);
  CHECK_THROWS_AS(run_experiment(co), ConfigError);
  CHECK_NOTHROW(preflight(parse_config("experiment = coercivity\n")));
}

TEST_CASE("plane wave run, report files and determinism") {
  const auto cfg = parse_config("experiment = plane_wave\ncheckpoint = true\n");
  const auto r1 = run_experiment(cfg);
  CHECK(r1.status == RunStatus::pass);
  CHECK(exit_code(r1) == 0);
  REQUIRE(r1.trajectory.has_value());
  const auto root = scratch("plane");
  const auto files = write_report(r1, root);
  CHECK(files.csv == root / "plane_wave" / "series.csv");
  REQUIRE(files.checkpoint.has_value());
  CHECK(fs::exists(*files.checkpoint));
  const std::string csv = slurp(files.csv), json = slurp(files.json);
  CHECK(csv.rfind("t,phase_error,amplitude_error,field_error\n", 0) == 0);
  CHECK(json.find("\"status\": \"pass\"") != std::string::npos);
  CHECK(json.find("wall") == std::string::npos);

  const auto r2 = run_experiment(cfg);
  const auto root2 = scratch("plane2");
  const auto files2 = write_report(r2, root2);
  CHECK(slurp(files2.csv) == csv);
  CHECK(slurp(files2.json) == json);
  CHECK(slurp(*files2.checkpoint) == slurp(*files.checkpoint));
}

TEST_CASE("seeded random experiments are reproducible") {
  const auto cfg = parse_config(
      "experiment = difference\nn_points = 128\nt_end = 0.05\nrecord_every = 10\nsweep_amplitudes = [1e-2, 1e-3]\n");
  const auto a = run_experiment(cfg), b = run_experiment(cfg);
  CHECK(series_csv(a.series) == series_csv(b.series));
  CHECK(report_json(a) == report_json(b));
  auto other = cfg;
  other.rng_seed = 2;
  CHECK(series_csv(run_experiment(other).series) != series_csv(a.series));
}

TEST_CASE("numerical failures are captured with exit status 3") {
  // a tiny declared amplitude bound defeats the CFL guard on purpose
  const auto cfg = parse_config(
      "experiment = conservation\nn_points = 256\ndatum_amplitude = 4\ndt = 0.05\nt_end = 20\n"
      "amp_bound = 1e-3\nrecord_every = 1\n");
  const auto r = run_experiment(cfg);
  CHECK(r.status == RunStatus::numerical_error);
  CHECK(exit_code(r) == 3);
  CHECK_FALSE(r.error.empty());
  CHECK(r.series.rows.size() >= 1);
  CHECK(report_json(r).find("\"status\": \"numerical_error\"") != std::string::npos);
}

TEST_CASE("output root from the environment") {
  ::setenv(kOutputRootEnv, "/tmp/somewhere", 1);
  CHECK(output_root() == fs::path("/tmp/somewhere"));
  ::setenv(kOutputRootEnv, "", 1);
  CHECK(output_root() == fs::path("dnls-lab-output"));
  ::unsetenv(kOutputRootEnv);
  CHECK(output_root() == fs::path("dnls-lab-output"));
}

TEST_CASE("checkpoint round trip and failure modes") {
  const auto dir = scratch("ckpt");
  const auto traj = small_trajectory(16);
  const auto path = dir / "t.ckpt";
  checkpoint_save(traj, path);
  CHECK(fs::file_size(path) == 48 + 3 * (8 + 16 * 16));
  const auto back = checkpoint_load(path, *traj.grid);
  REQUIRE(back.snapshots.size() == 3);
  CHECK(back.times == traj.times);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t j = 0; j < 16; ++j) {
      CHECK(std::memcmp(&back.snapshots[k][j], &traj.snapshots[k][j], sizeof(cplx)) == 0);
    }
  }
  CHECK(back.grid->center() == 0.5);

  auto other = make_grid(32, 10.0, 0.5);
  try {
    checkpoint_load(path, *other);
    FAIL("expected CheckpointError");
  } catch (const CheckpointError& e) {
    const std::string m = e.what();
    CHECK(m.find("n_points=16") != std::string::npos);
    CHECK(m.find("n_points=32") != std::string::npos);
  }

  const std::string bytes = slurp(path);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream(dir / name, std::ios::binary) << content;
    return dir / name;
  };
  CHECK_THROWS_WITH_AS(checkpoint_load(write("trunc.ckpt", bytes.substr(0, bytes.size() - 5))),
                       doctest::Contains("corrupt"), CheckpointError);
  CHECK_THROWS_WITH_AS(checkpoint_load(write("head.ckpt", bytes.substr(0, 20))), doctest::Contains("truncated"),
                       CheckpointError);
  std::string v2 = bytes;
  v2[8] = 2;
  CHECK_THROWS_WITH_AS(checkpoint_load(write("v2.ckpt", v2)), doctest::Contains("version 2"), CheckpointError);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(checkpoint_load(write("magic.ckpt", bad)), doctest::Contains("magic"), CheckpointError);
  CHECK_THROWS_AS(checkpoint_load(dir / "missing.ckpt"), CheckpointError);
}
