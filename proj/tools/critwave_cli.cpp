// critwave: command-line driver for simulations and verification runs.
//
// Exit codes: 0 ok, 1 internal, 2 config/usage, 3 I/O, 4 instability,
// 5 invariant or criterion failure, 6 config hash mismatch.
// Failures print one JSON line {"reason": ..., "message": ...} on stderr.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "critwave/experiments.hpp"

namespace fs = std::filesystem;
using namespace critwave;

namespace {

enum Exit { kOk = 0, kInternal = 1, kConfig = 2, kIo = 3, kInstability = 4, kViolation = 5, kHash = 6 };

int fail(int code, const std::string& reason, const std::string& message) {
  nlohmann::ordered_json j;
  j["reason"] = reason;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Context {
  ExperimentConfig config;
  fs::path out;
};

Context prepare(const Options& o) {
  Context c{load_experiment_config(o.config), {}};
  if (o.seed) {
    c.config.seed = *o.seed;
    c.config.validate();
  }
  c.out = o.out.empty() ? c.config.output_dir : fs::path(o.out);
  return c;
}

std::string g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

int cmd_simulate(const Options& o) {
  const Context c = prepare(o);
  const RunSummary s = run_simulate(c.config, c.out);
  if (!o.quiet) {
    std::cout << "config_hash " << s.config_hash << "\n"
              << "steps " << s.steps << "  samples " << s.samples << "\n"
              << "E(0) " << g(s.initial_energy) << "  E(T) " << g(s.final_energy) << "\n"
              << "E1(0) " << g(s.initial_higher_energy) << "  E1(T) " << g(s.final_higher_energy) << "\n"
              << "identity residual " << g(s.identity_residual) << "\n"
              << "L5L10 " << g(s.strichartz_l5_l10) << "  L4L12 " << g(s.strichartz_l4_l12) << "\n";
    if (s.decay) std::cout << "decay exponent " << g(s.decay->exponent) << "\n";
    if (s.nakao_c1) std::cout << "nakao C1 " << g(*s.nakao_c1) << "  margin " << g(*s.nakao_envelope_margin) << "\n";
    std::cout << "quadrature estimate " << g(s.quadrature_estimate) << "\n"
              << "wall_seconds " << g(s.wall_seconds) << "\n"
              << "wrote " << (c.out / "trace.csv").string() << " " << (c.out / "summary.json").string() << "\n";
  }
  if (!s.violations.empty()) {
    std::string list;
    for (const auto& v : s.violations) list += (list.empty() ? "" : ",") + v;
    return fail(kViolation, "invariant_violation", list);
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  const Context c = prepare(o);
  const auto& levels = c.config.analysis.sweep_levels;
  if (levels.empty()) return fail(kConfig, "config_error", "analysis.sweep_levels is empty");
  const SweepReport r = run_convergence_sweep(c.config, levels);
  fs::create_directories(c.out);
  std::string csv = "# config_hash=" + r.config_hash + "\nlevel,difference,l5_l10,l4_l12,final_energy,tail_fraction,under_resolved\n";
  bool any_unresolved = false;
  for (const auto& row : r.rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", row.level,
                  row.difference.value_or(std::nan("")), row.l5_l10, row.l4_l12, row.final_energy, row.tail_fraction,
                  row.under_resolved ? 1 : 0);
    csv += buf;
    any_unresolved = any_unresolved || row.under_resolved;
  }
  write_text(c.out / "sweep.csv", csv);
  write_text(c.out / "sweep.json", to_json(r));
  if (!o.quiet) {
    for (const auto& row : r.rows) {
      std::cout << "level " << row.level << "  diff " << (row.difference ? g(*row.difference) : "-") << "  L5L10 "
                << g(row.l5_l10) << "  L4L12 " << g(row.l4_l12) << (row.under_resolved ? "  [under-resolved]" : "")
                << "\n";
    }
  }
  if (!r.differences_decrease && !any_unresolved) {
    return fail(kViolation, "sweep_not_converging", "differences do not decrease across resolved levels");
  }
  return kOk;
}

int cmd_multipliers(const Options& o) {
  const Context c = prepare(o);
  const MultiplierReport r = run_multiplier_suite(make_domain(c.config), c.config.analysis, c.config.seed.value_or(0));
  fs::create_directories(c.out);
  write_text(c.out / "multipliers.json", to_json(r));
  if (!o.quiet) {
    for (const auto& ch : r.checks) {
      std::cout << (ch.pass ? "PASS " : "FAIL ") << ch.name << "  measured " << g(ch.measured) << "  threshold "
                << g(ch.threshold) << "\n";
    }
  }
  if (!r.all_pass()) return fail(kViolation, "property_failure", "multiplier property check failed");
  return kOk;
}

int cmd_decay(const Options& o) {
  const Context c = prepare(o);
  const DecayStudyReport r = run_decay_study(c.config);
  fs::create_directories(c.out);
  std::string csv = "# config_hash=" + r.config_hash +
                    "\nmodel,e0,lower_bound_holds,lower_min_ratio,sandwich_mu,nakao_c1,envelope_margin,max_n_envelope,exponent\n";
  for (const auto& row : r.rows) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.model.c_str(), row.e0,
                  row.lower.holds ? 1 : 0, row.lower.min_ratio, row.sandwich_mu, row.nakao_c1.value_or(std::nan("")),
                  row.nakao_envelope_margin.value_or(std::nan("")), row.nakao_max_n_envelope.value_or(std::nan("")),
                  row.decay ? row.decay->exponent : std::nan(""));
    csv += buf;
  }
  write_text(c.out / "decay_study.csv", csv);
  write_text(c.out / "decay_study.json", to_json(r));
  if (!o.quiet) {
    for (const auto& row : r.rows) {
      std::cout << row.model << " E0=" << g(row.e0) << "  lower " << (row.lower.holds ? "ok" : "VIOLATED")
                << "  mu " << g(row.sandwich_mu) << "  alpha " << (row.decay ? g(row.decay->exponent) : "-") << "\n";
    }
  }
  if (!r.ok) return fail(kViolation, "lower_bound_violation", r.failure);
  return kOk;
}

int cmd_nakao(const Options& o) {
  const Context c = prepare(o);
  const NakaoSummary s = run_nakao(c.config, c.out / "trace.csv");
  write_text(c.out / "nakao.json", to_json(s));
  if (!o.quiet) {
    std::cout << "C1 " << g(s.c1) << "  envelope margin " << g(s.envelope_margin) << "  max n*E_n "
              << g(s.max_n_envelope) << "  windows " << s.windows_used << "/" << s.windows << "\n";
  }
  if (s.envelope_margin < 0.0) return fail(kViolation, "envelope_violation", "Nakao envelope falls below E");
  return kOk;
}

int cmd_oracle(const Options& o) {
  const Context c = prepare(o);
  const OracleReport r = run_oracle_check(c.config);
  fs::create_directories(c.out);
  write_text(c.out / "oracle.json", to_json(r));
  if (!o.quiet) std::cout << "sup deviation " << g(r.deviation) << "  tolerance " << g(r.tolerance) << "\n";
  if (!r.pass) return fail(kViolation, "oracle_deviation", "deviation " + g(r.deviation) + " exceeds " + g(r.tolerance));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critwave: damped energy-critical wave simulator"};
  app.require_subcommand(1);
  Options opts;

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Options&);
  };
  const Sub subs[] = {
      {"simulate", "run one simulation; writes trace.csv and summary.json", cmd_simulate},
      {"sweep-m", "convergence sweep over analysis.sweep_levels", cmd_sweep},
      {"multiplier-test", "spectral multiplier property suite", cmd_multipliers},
      {"decay-study", "decay comparison across analysis.energies", cmd_decay},
      {"nakao", "re-analyse <out>/trace.csv with the Nakao chain", cmd_nakao},
      {"oracle-check", "compare against the high-precision reference (1D, <= 4 modes)", cmd_oracle},
  };
  std::uint64_t seed = 0;
  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--config", opts.config, "config file")->required();
    sc->add_option("--out", opts.out, "output directory (default: output.directory)");
    sc->add_option("--seed", seed, "override initial.seed");
    sc->add_flag("--quiet", opts.quiet, "suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kConfig, "usage_error", e.what());
  }

  for (const auto& s : subs) {
    auto* sc = app.get_subcommand(s.name);
    if (!sc->parsed()) continue;
    if (sc->count("--seed")) opts.seed = seed;
    try {
      return s.run(opts);
    } catch (const ConfigError& e) {
      return fail(kConfig, "config_error", e.what());
    } catch (const HashMismatch& e) {
      return fail(kHash, "hash_mismatch", e.what());
    } catch (const SimulationError& e) {
      return fail(kInstability, "instability", e.what());
    } catch (const fs::filesystem_error& e) {
      return fail(kIo, "io_error", e.what());
    } catch (const std::exception& e) {
      return fail(kInternal, "internal_error", e.what());
    }
  }
  return fail(kConfig, "usage_error", "no subcommand");
}
