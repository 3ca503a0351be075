#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "critwave/config_file.hpp"
#include "critwave/diagnostics.hpp"
#include "critwave/initial_data.hpp"
#include "critwave/wave_dynamics.hpp"

namespace critwave {

enum class InitialKind { Modes, Bump, Random };

struct InitialDataSpec {
  InitialKind kind = InitialKind::Modes;
  std::vector<ModeAmplitude> modes;
  std::vector<double> bump_center;  // empty -> box centre
  double bump_width = 0.5;
  double bump_amplitude = 1.0;
  int random_band = 8;
  /// Rescale (u0, u1) so that E(0) equals this value.
  std::optional<double> target_energy;
};

/// Knobs for the analysis subcommands. Defaults reproduce the acceptance setup.
struct AnalysisSpec {
  double fit_begin = 10.0;
  double fit_end = 200.0;
  std::vector<int> sweep_levels;                       // modes per axis
  std::vector<double> energies{0.5, 1.0, 2.0};         // decay-study family
  std::vector<double> multiplier_levels{4, 8, 16, 32};
  std::vector<double> regularization_orders{1, 2};
  std::vector<double> lp_exponents{10};
  int multiplier_samples = 16;
  double oracle_tolerance = 1e-6;
};

struct ExperimentConfig {
  int dim = 1;
  std::vector<double> lengths{3.141592653589793};
  int modes = 64;
  ModelConfig model;
  double dt = 1e-3;
  double duration = 10.0;
  int stride = 10;
  InitialDataSpec initial;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "out";
  AnalysisSpec analysis;

  /// Throws ConfigError on out-of-range values or missing seed for random data.
  void validate() const;
};

ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Fully explicit re-serialization; parses back to an equal config. The output
/// directory is left out so relocated runs share a hash.
std::string canonical_config(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a (64 bit) over canonical_config.
std::string config_hash(const ExperimentConfig& config);

DomainPtr make_domain(const ExperimentConfig& config, std::optional<int> modes = std::nullopt);
/// Initial state from the config: built, projected by the model projector when
/// it is a Sharp truncation, then rescaled to the target energy.
State initial_state(const ExperimentConfig& config, const DomainPtr& domain);

// --- persistence -------------------------------------------------------------

inline constexpr std::string_view kTraceHeader = "t,E,E1,ut_l2sq,diss_integral,l10,l12,sm_defect";

void write_trace_csv(const std::filesystem::path& path, const EnergyTrace& trace, const std::string& hash);
/// Reads a trace written by write_trace_csv. Strichartz accumulators are rebuilt
/// from the l10 / l12 columns. Throws std::runtime_error on malformed input.
EnergyTrace read_trace_csv(const std::filesystem::path& path, std::string* hash = nullptr);

class HashMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CriterionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- simulate ----------------------------------------------------------------

struct RunSummary {
  std::string config_hash;
  std::size_t steps = 0;
  std::size_t samples = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  double initial_higher_energy = 0.0;
  double final_higher_energy = 0.0;
  std::optional<DecayFit> decay;
  std::optional<double> nakao_c1;
  std::optional<double> nakao_envelope_margin;
  std::optional<double> nakao_max_n_envelope;
  double strichartz_l5_l10 = 0.0;
  double strichartz_l4_l12 = 0.0;
  double identity_residual = 0.0;
  double max_energy_increase = 0.0;
  double energy_total_variation = 0.0;
  /// Relative change of ||u(T)||_10 between quadrature padding 3 and 4.
  double quadrature_estimate = 0.0;
  bool resolution_warning = false;
  std::vector<std::string> violations;
  /// Not serialized: kept out of the JSON so repeated runs stay byte-identical.
  double wall_seconds = 0.0;
};

struct RunOutput {
  RunSummary summary;
  SimulationResult result;
};

/// Runs the configured simulation and derives the summary. No files are written.
RunOutput run_experiment(const ExperimentConfig& config);

/// run_experiment plus trace.csv and summary.json under `out`.
RunSummary run_simulate(const ExperimentConfig& config, const std::filesystem::path& out);

std::string summary_json(const RunSummary& summary);

// --- convergence sweep -------------------------------------------------------

struct SweepRow {
  int level = 0;
  /// Energy-norm distance to the next level at T; absent for the last level.
  std::optional<double> difference;
  double l5_l10 = 0.0;
  double l4_l12 = 0.0;
  double final_energy = 0.0;
  /// Share of energy-norm content in the top quarter of the modes at T;
  /// above 1e-6 the level is flagged as under-resolved.
  double tail_fraction = 0.0;
  bool under_resolved = false;
};

struct SweepReport {
  std::string config_hash;
  std::vector<SweepRow> rows;
  bool differences_decrease = true;
};

/// One run per level (modes per axis), executed concurrently. Data are built on
/// the largest level and transferred down, so every level sees the projection
/// of the same field.
SweepReport run_convergence_sweep(const ExperimentConfig& config, std::span<const int> levels);

// --- multiplier suite --------------------------------------------------------

struct PropertyCheck {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct MultiplierLevelRow {
  double level = 0.0;
  double sharp_lp = 0.0;   // max ||P v||_p / ||v||_p
  double smooth_lp = 0.0;  // max ||S v||_p / ||v||_p
  std::vector<double> regularization;  // per order s
};

struct MultiplierReport {
  double lp_exponent = 10.0;
  std::vector<double> orders;
  std::vector<MultiplierLevelRow> rows;
  std::vector<PropertyCheck> checks;
  bool all_pass() const;
};

MultiplierReport run_multiplier_suite(const DomainPtr& domain, const AnalysisSpec& analysis, std::uint64_t seed);

// --- decay study -------------------------------------------------------------

struct DecayStudyRow {
  std::string model;  // "bt" or "pde"
  double e0 = 0.0;
  bool lower_bound_asserted = false;
  LowerBoundCheck lower;
  std::optional<double> first_violation_time;
  double sandwich_mu = 0.0;
  std::optional<double> nakao_c1;
  std::optional<double> nakao_envelope_margin;
  std::optional<double> nakao_max_n_envelope;
  std::optional<DecayFit> decay;
  double max_energy_increase = 0.0;
};

struct DecayStudyReport {
  std::string config_hash;
  std::vector<DecayStudyRow> rows;
  bool ok = true;
  std::string failure;
};

/// For each E0 in analysis.energies: a single-mode Balakrishnan-Taylor run and a
/// PDE run of the configured model, both to `duration`. The lower bound is
/// asserted for the single mode and for linear PDE models.
DecayStudyReport run_decay_study(const ExperimentConfig& config);

// --- Nakao re-analysis ------------------------------------------------------

struct NakaoSummary {
  std::string config_hash;
  double c1 = 0.0;
  double envelope_margin = 0.0;
  double max_n_envelope = 0.0;
  std::size_t windows = 0;
  std::size_t windows_used = 0;
};

/// Re-reads `trace_path`, checks its hash against the config, and runs the
/// Nakao analysis. Throws HashMismatch when the hashes disagree.
NakaoSummary run_nakao(const ExperimentConfig& config, const std::filesystem::path& trace_path);

// --- oracle -----------------------------------------------------------------

struct OracleReport {
  std::string config_hash;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// 1D configs with at most 4 modes: the Strang trajectory against the adaptive
/// reference at every sample over [0, duration].
OracleReport run_oracle_check(const ExperimentConfig& config);

// --- JSON renderings (stable key order) ---------------------------------------

std::string to_json(const SweepReport& report);
std::string to_json(const MultiplierReport& report);
std::string to_json(const DecayStudyReport& report);
std::string to_json(const NakaoSummary& summary);
std::string to_json(const OracleReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace critwave
