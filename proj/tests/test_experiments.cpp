#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "critwave/experiments.hpp"

using namespace critwave;
namespace fs = std::filesystem;

namespace {

const char* kSmall = R"(
[domain]
dim = 1
modes = 16
[time]
dt = 1e-2
duration = 3
stride = 5
[initial]
kind = modes
modes = 1:0.8:0 2:0.2:0.1
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("critwave_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

int run_cli(const std::string& args, const fs::path& stderr_file) {
  const std::string cmd = std::string(CRITWAVE_CLI) + " " + args + " > /dev/null 2> " + stderr_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing: defaults, values and constants") {
  const auto c = parse_experiment_config(kSmall);
  CHECK(c.dim == 1);
  CHECK(c.modes == 16);
  CHECK(c.lengths.at(0) == doctest::Approx(3.141592653589793));
  CHECK(c.initial.modes.size() == 2);
  CHECK(c.initial.modes[1].v == 0.1);
  CHECK(c.model.quintic);
  const auto d = parse_experiment_config("[domain]\ndim = 2\nlength = 2*pi, pi/2\n[initial]\nmodes = 1,2:1:0\n");
  CHECK(d.lengths.at(1) == doctest::Approx(1.5707963267948966));
  CHECK(d.initial.modes.at(0).k.k[1] == 2);
}

TEST_CASE("config errors: unknown keys, bad values, missing seed") {
  CHECK_THROWS_AS(parse_experiment_config("[domain]\nmodez = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[domian]\nmodes = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[domain]\nmodes = 8\nmodes = 9\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[domain]\nmodes = eight\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("modes = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[initial]\nkind = random\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[time]\ndt = 0.3\nduration = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[model]\ndamping = strong\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("[initial]\nmodes = 100:1:0\n"), ConfigError);
  CHECK_NOTHROW(parse_experiment_config("[initial]\nkind = random\nseed = 5\n"));
}

TEST_CASE("canonical form round-trips and drives the hash") {
  const auto c = parse_experiment_config(kSmall);
  const auto again = parse_experiment_config(canonical_config(c));
  CHECK(canonical_config(again) == canonical_config(c));
  CHECK(config_hash(again) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  auto moved = c;
  moved.output_dir = "elsewhere";
  CHECK(config_hash(moved) == config_hash(c));
  auto changed = c;
  changed.dt = 5e-3;
  CHECK(config_hash(changed) != config_hash(c));
}

TEST_CASE("the checked-in reference config is valid") {
  const auto c = load_experiment_config(fs::path(CRITWAVE_CONFIG_DIR) / "reference.ini");
  CHECK(c.model.quintic);
  CHECK(c.initial.target_energy == 1.0);
}

TEST_CASE("zero data produce an all-zero trace") {
  auto c = parse_experiment_config("[time]\ndt = 1e-2\nduration = 1\nstride = 10\n[initial]\nkind = modes\n");
  const auto out = scratch("zero");
  const auto s = run_simulate(c, out);
  CHECK(s.final_energy == 0.0);
  CHECK(s.violations.empty());
  const auto tr = read_trace_csv(out / "trace.csv");
  CHECK(tr.size() == 11);
  for (std::size_t i = 0; i < tr.size(); ++i) CHECK(tr.energy[i] == 0.0);
  fs::remove_all(out);
}

TEST_CASE("trace CSV round-trips bit for bit") {
  const auto c = parse_experiment_config(kSmall);
  const auto r = run_experiment(c);
  const auto out = scratch("roundtrip");
  fs::create_directories(out);
  write_trace_csv(out / "trace.csv", r.result.trace, r.summary.config_hash);
  std::string hash;
  const auto back = read_trace_csv(out / "trace.csv", &hash);
  CHECK(hash == r.summary.config_hash);
  CHECK(back.time == r.result.trace.time);
  CHECK(back.energy == r.result.trace.energy);
  CHECK(back.dissipation == r.result.trace.dissipation);
  CHECK(back.strichartz_5_10 == r.result.trace.strichartz_5_10);
  CHECK(slurp(out / "trace.csv").find(std::string(kTraceHeader)) != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("repeated runs write identical files") {
  auto c = parse_experiment_config("[domain]\ndim = 2\nmodes = 8\n[time]\ndt = 1e-2\nduration = 1\n"
                                   "[initial]\nkind = random\nband = 4\nenergy = 0.5\nseed = 17\n");
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_simulate(c, a);
  run_simulate(c, b);
  CHECK(slurp(a / "trace.csv") == slurp(b / "trace.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("Nakao re-analysis checks the config hash") {
  auto c = parse_experiment_config(kSmall);
  const auto out = scratch("nakao");
  run_simulate(c, out);
  const auto s = run_nakao(c, out / "trace.csv");
  CHECK(s.c1 > 0.0);
  CHECK(s.envelope_margin >= 0.0);
  auto other = c;
  other.dt = 5e-3;
  CHECK_THROWS_AS(run_nakao(other, out / "trace.csv"), HashMismatch);
  fs::remove_all(out);
}

TEST_CASE("sweep: Galerkin-projected band-limited data agree across levels") {
  auto c = parse_experiment_config("[model]\nprojector = sharp\nprojector_level = 6\n[time]\ndt = 1e-2\nduration = 2\n"
                                   "[initial]\nmodes = 1:0.8:0 3:0.2:0.1\n");
  const std::vector<int> levels{16, 32, 64};
  const auto rep = run_convergence_sweep(c, levels);
  REQUIRE(rep.rows.size() == 3);
  CHECK(*rep.rows[0].difference < 1e-12);
  CHECK(*rep.rows[1].difference < 1e-12);
  CHECK_FALSE(rep.rows[2].difference.has_value());
  const std::vector<int> one{32};
  const auto single = run_convergence_sweep(c, one);
  CHECK(single.rows.size() == 1);
  CHECK_FALSE(single.rows[0].difference.has_value());
}

TEST_CASE("sweep: smooth bump differences decrease with the level") {
  auto c = parse_experiment_config("[time]\ndt = 1e-2\nduration = 2\n[initial]\nkind = bump\nwidth = 1.2\n");
  const std::vector<int> levels{16, 32, 64, 128};
  const auto rep = run_convergence_sweep(c, levels);
  CHECK(rep.differences_decrease);
  CHECK(*rep.rows[2].difference < *rep.rows[0].difference);
  CHECK(rep.rows[0].under_resolved);
}

TEST_CASE("multiplier suite passes on a small domain") {
  AnalysisSpec a;
  a.multiplier_levels = {2, 4, 8};
  const auto rep = run_multiplier_suite(BoxDomain::make(2, 12), a, 3);
  for (const auto& c : rep.checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(rep.rows.size() == 3);
}

TEST_CASE("decay study: lower bound holds for the linear prototype") {
  auto c = parse_experiment_config("[model]\nquintic = false\n[time]\ndt = 1e-2\nduration = 30\nstride = 5\n"
                                   "[initial]\nmodes = 1:1:0 2:0.3:0\n[analysis]\nfit_window = 5, 30\nenergies = 0.5, 2\n");
  const auto rep = run_decay_study(c);
  CHECK(rep.ok);
  CHECK(rep.rows.size() == 4);
  for (const auto& row : rep.rows) {
    CHECK(row.lower_bound_asserted);
    CHECK(row.lower.holds);
    REQUIRE(row.decay.has_value());
    CHECK(row.decay->exponent < -0.5);
  }
  auto undamped = c;
  undamped.model.damping = DampingKind::None;
  CHECK_THROWS_AS(run_decay_study(undamped), ConfigError);
}

TEST_CASE("oracle check: small system passes, a coarse step fails, large systems are refused") {
  auto c = parse_experiment_config("[domain]\nmodes = 4\n[time]\ndt = 1e-3\nduration = 2\nstride = 100\n"
                                   "[initial]\nmodes = 1:0.8:0 2:0.2:0.3\n");
  CHECK(run_oracle_check(c).pass);
  c.dt = 0.25;
  c.stride = 1;
  const auto coarse = run_oracle_check(c);
  CHECK_FALSE(coarse.pass);
  CHECK(coarse.deviation > 1e-6);
  c.modes = 8;
  CHECK_THROWS_AS(run_oracle_check(c), ConfigError);
}

TEST_CASE("CLI exit codes and machine-readable failures") {
  const auto dir = scratch("cli");
  fs::create_directories(dir);
  const auto cfg = dir / "run.ini";
  {
    std::ofstream(cfg) << kSmall;
  }
  const auto err = dir / "stderr.txt";
  const std::string base = "--config " + cfg.string() + " --out " + (dir / "out").string() + " --quiet";

  CHECK(run_cli("simulate " + base, err) == 0);
  CHECK(fs::exists(dir / "out" / "trace.csv"));
  CHECK(fs::exists(dir / "out" / "summary.json"));
  CHECK(run_cli("nakao " + base, err) == 0);
  CHECK(run_cli("nakao " + base + " --seed 99", err) == 6);
  CHECK(slurp(err).find("\"reason\":\"hash_mismatch\"") != std::string::npos);

  {
    std::ofstream(dir / "bad.ini") << "[domain]\nwidth = 3\n";
  }
  CHECK(run_cli("simulate --config " + (dir / "bad.ini").string() + " --out " + (dir / "o2").string(), err) == 2);
  CHECK(slurp(err).find("\"reason\":\"config_error\"") != std::string::npos);
  CHECK(run_cli("simulate --config " + (dir / "missing.ini").string(), err) == 2);
  CHECK(run_cli("simulate", err) == 2);
  CHECK(run_cli("bogus --config x", err) == 2);

  CHECK(run_cli("simulate --quiet --config " + cfg.string() + " --out /proc/critwave_cannot_write", err) == 3);
  CHECK(slurp(err).find("\"reason\":\"io_error\"") != std::string::npos);

  {
    std::ofstream(dir / "oracle.ini") << "[domain]\nmodes = 4\n[time]\ndt = 0.25\nduration = 2\nstride = 1\n"
                                          "[initial]\nmodes = 1:0.8:0\n";
  }
  CHECK(run_cli("oracle-check --quiet --config " + (dir / "oracle.ini").string() + " --out " + (dir / "o3").string(), err) == 5);
  CHECK(slurp(err).find("\"reason\":\"oracle_deviation\"") != std::string::npos);

  {
    std::ofstream(dir / "blowup.ini") << "[domain]\nmodes = 16\n[model]\ndamping = none\n"
                                          "[time]\ndt = 0.2\nduration = 2\n[initial]\nmodes = 1:6:0 2:6:0\n";
  }
  CHECK(run_cli("simulate --quiet --config " + (dir / "blowup.ini").string() + " --out " + (dir / "o4").string(), err) == 4);
  CHECK(slurp(err).find("\"reason\":\"instability\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("CLI output is byte-identical across reruns") {
  const auto dir = scratch("cli_det");
  fs::create_directories(dir);
  const auto cfg = dir / "run.ini";
  {
    std::ofstream(cfg) << kSmall;
  }
  const auto err = dir / "stderr.txt";
  for (const char* sub : {"a", "b"}) {
    CHECK(run_cli("simulate --quiet --config " + cfg.string() + " --out " + (dir / sub).string(), err) == 0);
  }
  CHECK(slurp(dir / "a" / "trace.csv") == slurp(dir / "b" / "trace.csv"));
  CHECK(slurp(dir / "a" / "summary.json") == slurp(dir / "b" / "summary.json"));
  fs::remove_all(dir);
}
