#include "critwave/experiments.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <numbers>
#include <sstream>

#include "critwave/multipliers.hpp"
#include "critwave/reference.hpp"

namespace critwave {
namespace {

using Json = nlohmann::ordered_json;

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + fmt(xs[i]);
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + std::to_string(xs[i]);
  return out;
}

std::vector<int> to_ints(const std::vector<double>& xs, const std::string& key) {
  std::vector<int> out;
  for (double x : xs) {
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(key + ": expected integers");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

const char* damping_name(DampingKind k) {
  switch (k) {
    case DampingKind::EnergyCoefficient: return "energy";
    case DampingKind::None: return "none";
    case DampingKind::Constant: return "constant";
  }
  return "?";
}

const char* potential_name(PotentialTerm p) {
  switch (p) {
    case PotentialTerm::Auto: return "auto";
    case PotentialTerm::Include: return "include";
    case PotentialTerm::Exclude: return "exclude";
  }
  return "?";
}

const char* kind_name(InitialKind k) {
  switch (k) {
    case InitialKind::Modes: return "modes";
    case InitialKind::Bump: return "bump";
    case InitialKind::Random: return "random";
  }
  return "?";
}

// Entries "k:u:v" separated by whitespace; k is "k1" or "k1,k2[,k3]".
std::vector<ModeAmplitude> parse_modes(const std::string& text, int dim) {
  std::vector<ModeAmplitude> out;
  std::istringstream in(text);
  std::string entry;
  while (in >> entry) {
    const auto parts = split(entry, ':');
    if (parts.size() != 3) throw ConfigError("initial.modes: entry '" + entry + "' is not k:u:v");
    const auto idx = split(parts[0], ',');
    if (static_cast<int>(idx.size()) != dim) {
      throw ConfigError("initial.modes: entry '" + entry + "' needs " + std::to_string(dim) + " indices");
    }
    std::array<int, 3> k{1, 1, 1};
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const double v = parse_real(idx[i]);
      if (v != std::floor(v) || v < 1) throw ConfigError("initial.modes: bad index in '" + entry + "'");
      k[i] = static_cast<int>(v);
    }
    ModeAmplitude m{dim == 1 ? ModeIndex(k[0]) : dim == 2 ? ModeIndex(k[0], k[1]) : ModeIndex(k[0], k[1], k[2]),
                    parse_real(parts[1]), parse_real(parts[2])};
    out.push_back(m);
  }
  return out;
}

std::string format_modes(const std::vector<ModeAmplitude>& modes) {
  std::string out;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (i) out += ' ';
    for (int a = 0; a < modes[i].k.dim; ++a) out += (a ? "," : "") + std::to_string(modes[i].k.k[static_cast<std::size_t>(a)]);
    out += ':' + fmt(modes[i].u) + ':' + fmt(modes[i].v);
  }
  return out;
}

Json opt(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

Json fit_json(const std::optional<DecayFit>& f) {
  if (!f) return nullptr;
  Json j;
  j["t_begin"] = f->t_begin;
  j["t_end"] = f->t_end;
  j["exponent"] = f->exponent;
  j["constant"] = f->constant;
  j["residual"] = f->residual;
  j["samples"] = f->samples;
  return j;
}

std::optional<DecayFit> try_fit(std::span<const double> t, std::span<const double> e, const AnalysisSpec& a) {
  if (t.empty()) return std::nullopt;
  const double end = std::min(a.fit_end, t.back());
  if (!(end > a.fit_begin)) return std::nullopt;
  try {
    return decay_fit(t, e, a.fit_begin, end);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

EnergyTrace energy_only_trace(std::span<const double> t, std::span<const double> e) {
  EnergyTrace tr;
  for (std::size_t i = 0; i < t.size(); ++i) tr.append({t[i], e[i], 0, 0, 0, 0, 0});
  return tr;
}

std::optional<NakaoReport> try_nakao(const EnergyTrace& tr) {
  if (tr.empty() || tr.time.back() - tr.time.front() < 2.0) return std::nullopt;
  try {
    return nakao_inequality_constant(tr);
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

// ||(a - b)|| in the energy norm sqrt(||grad du||^2 + ||dv||^2), on a's domain.
double energy_distance(const State& a, const State& b) {
  const auto lam = a.domain().eigenvalues();
  double acc = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k) {
    const double du = a.u[k] - b.u[k];
    const double dv = a.v[k] - b.v[k];
    acc += lam[k] * du * du + dv * dv;
  }
  return std::sqrt(acc);
}

double tail_fraction(const State& s) {
  const BoxDomain& d = s.domain();
  const auto lam = d.eigenvalues();
  const int cut = (3 * d.modes()) / 4;
  double total = 0.0, tail = 0.0;
  for (std::size_t k = 0; k < s.u.size(); ++k) {
    const double e = lam[k] * s.u[k] * s.u[k] + s.v[k] * s.v[k];
    total += e;
    const ModeIndex mi = d.mode_index(k);
    bool high = false;
    for (int a = 0; a < mi.dim; ++a) high = high || mi.k[static_cast<std::size_t>(a)] > cut;
    if (high) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace

// --- config -------------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("domain.dim must be 1, 2 or 3");
  if (lengths.size() != 1 && static_cast<int>(lengths.size()) != dim) {
    throw ConfigError("domain.length needs 1 or dim values");
  }
  for (double l : lengths) {
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("domain.length must be positive and finite");
  }
  if (modes < 4 || modes > 1 << 16) throw ConfigError("domain.modes must lie in [4, 65536]");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time.dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw ConfigError("time.duration must be >= 0");
  const double steps = duration / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps)) {
    throw ConfigError("time.duration must be an integer multiple of time.dt");
  }
  if (stride < 1) throw ConfigError("time.stride must be >= 1");
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  switch (initial.kind) {
    case InitialKind::Modes:
      for (const auto& m : initial.modes) {
        if (m.k.dim != dim) throw ConfigError("initial.modes: index dimension does not match domain.dim");
        for (int a = 0; a < dim; ++a) {
          if (m.k.k[static_cast<std::size_t>(a)] > modes) throw ConfigError("initial.modes: index above domain.modes");
        }
        if (!std::isfinite(m.u) || !std::isfinite(m.v)) throw ConfigError("initial.modes: non-finite amplitude");
      }
      break;
    case InitialKind::Bump:
      if (!initial.bump_center.empty() && static_cast<int>(initial.bump_center.size()) != dim) {
        throw ConfigError("initial.center needs dim coordinates");
      }
      if (!(initial.bump_width > 0.0)) throw ConfigError("initial.width must be positive");
      if (!std::isfinite(initial.bump_amplitude)) throw ConfigError("initial.amplitude must be finite");
      break;
    case InitialKind::Random:
      if (!seed) throw ConfigError("initial.seed is required for random data");
      if (initial.random_band < 1) throw ConfigError("initial.band must be >= 1");
      break;
  }
  if (initial.target_energy && !(*initial.target_energy >= 0.0 && std::isfinite(*initial.target_energy))) {
    throw ConfigError("initial.energy must be finite and >= 0");
  }
  const auto& a = analysis;
  if (!(a.fit_begin > 0.0) || !(a.fit_end > a.fit_begin)) throw ConfigError("analysis.fit_window must satisfy 0 < begin < end");
  for (std::size_t i = 0; i < a.sweep_levels.size(); ++i) {
    if (a.sweep_levels[i] < 4) throw ConfigError("analysis.sweep_levels must be >= 4");
    if (i && a.sweep_levels[i] <= a.sweep_levels[i - 1]) throw ConfigError("analysis.sweep_levels must increase");
  }
  for (double e : a.energies) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("analysis.energies must be positive");
  }
  for (std::size_t i = 0; i < a.multiplier_levels.size(); ++i) {
    if (!(a.multiplier_levels[i] > 0.0) || !std::isfinite(a.multiplier_levels[i])) {
      throw ConfigError("analysis.multiplier_levels must be positive");
    }
    if (i && a.multiplier_levels[i] <= a.multiplier_levels[i - 1]) {
      throw ConfigError("analysis.multiplier_levels must increase");
    }
  }
  for (double s : a.regularization_orders) {
    if (!(s >= 0.0)) throw ConfigError("analysis.regularization_orders must be >= 0");
  }
  for (double p : a.lp_exponents) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw ConfigError("analysis.lp_exponents must be >= 1");
  }
  if (a.multiplier_samples < 1) throw ConfigError("analysis.multiplier_samples must be >= 1");
  if (!(a.oracle_tolerance > 0.0)) throw ConfigError("analysis.oracle_tolerance must be positive");
}

ExperimentConfig parse_experiment_config(std::string_view text) {
  ConfigFile f = ConfigFile::parse(text);
  ExperimentConfig c;

  c.dim = static_cast<int>(f.get_int("domain", "dim", c.dim));
  c.lengths = f.get_doubles("domain", "length", c.lengths);
  c.modes = static_cast<int>(f.get_int("domain", "modes", c.modes));

  auto& m = c.model;
  m.quintic = f.get_bool("model", "quintic", m.quintic);
  const std::string damping = f.get_string("model", "damping", "energy");
  if (damping == "energy") m.damping = DampingKind::EnergyCoefficient;
  else if (damping == "none") m.damping = DampingKind::None;
  else if (damping == "constant") m.damping = DampingKind::Constant;
  else throw ConfigError("model.damping: expected energy, none or constant");
  m.damping_constant = f.get_double("model", "damping_constant", m.damping_constant);
  const std::string projector = f.get_string("model", "projector", "identity");
  const double level = f.get_double("model", "projector_level", std::numeric_limits<double>::infinity());
  if (projector == "identity") m.projector = MultiplierSpec::identity();
  else if (projector == "sharp") m.projector = MultiplierSpec::sharp(level);
  else if (projector == "smooth") m.projector = MultiplierSpec::smooth(level);
  else throw ConfigError("model.projector: expected identity, sharp or smooth");
  if (projector == "identity" && f.has("model", "projector_level") && std::isfinite(level)) {
    throw ConfigError("model.projector_level given for the identity projector");
  }
  const std::string potential = f.get_string("model", "potential", "auto");
  if (potential == "auto") m.potential = PotentialTerm::Auto;
  else if (potential == "include") m.potential = PotentialTerm::Include;
  else if (potential == "exclude") m.potential = PotentialTerm::Exclude;
  else throw ConfigError("model.potential: expected auto, include or exclude");
  m.padding = static_cast<int>(f.get_int("model", "padding", m.padding));

  c.dt = f.get_double("time", "dt", c.dt);
  c.duration = f.get_double("time", "duration", c.duration);
  c.stride = static_cast<int>(f.get_int("time", "stride", c.stride));

  auto& in = c.initial;
  const std::string kind = f.get_string("initial", "kind", "modes");
  if (kind == "modes") in.kind = InitialKind::Modes;
  else if (kind == "bump") in.kind = InitialKind::Bump;
  else if (kind == "random") in.kind = InitialKind::Random;
  else throw ConfigError("initial.kind: expected modes, bump or random");
  const std::string modes = f.get_string("initial", "modes", "");
  if (in.kind == InitialKind::Modes) in.modes = parse_modes(modes, c.dim);
  else if (!modes.empty()) throw ConfigError("initial.modes only applies to kind = modes");
  in.bump_center = f.get_doubles("initial", "center", {});
  in.bump_width = f.get_double("initial", "width", in.bump_width);
  in.bump_amplitude = f.get_double("initial", "amplitude", in.bump_amplitude);
  in.random_band = static_cast<int>(f.get_int("initial", "band", in.random_band));
  if (f.has("initial", "energy")) in.target_energy = f.get_double("initial", "energy", 0.0);
  if (f.has("initial", "seed")) {
    const long long s = f.get_int("initial", "seed", 0);
    if (s < 0) throw ConfigError("initial.seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  }

  c.output_dir = f.get_string("output", "directory", c.output_dir.string());

  auto& a = c.analysis;
  const auto window = f.get_doubles("analysis", "fit_window", {a.fit_begin, a.fit_end});
  if (window.size() != 2) throw ConfigError("analysis.fit_window needs two values");
  a.fit_begin = window[0];
  a.fit_end = window[1];
  a.sweep_levels = to_ints(f.get_doubles("analysis", "sweep_levels", {}), "analysis.sweep_levels");
  a.energies = f.get_doubles("analysis", "energies", a.energies);
  a.multiplier_levels = f.get_doubles("analysis", "multiplier_levels", a.multiplier_levels);
  a.regularization_orders = f.get_doubles("analysis", "regularization_orders", a.regularization_orders);
  a.lp_exponents = f.get_doubles("analysis", "lp_exponents", a.lp_exponents);
  a.multiplier_samples = static_cast<int>(f.get_int("analysis", "multiplier_samples", a.multiplier_samples));
  a.oracle_tolerance = f.get_double("analysis", "oracle_tolerance", a.oracle_tolerance);

  f.reject_unconsumed();
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

std::string canonical_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[domain]\n";
  o << "dim = " << c.dim << "\n";
  o << "length = " << join(c.lengths) << "\n";
  o << "modes = " << c.modes << "\n";
  o << "[model]\n";
  o << "quintic = " << (c.model.quintic ? "true" : "false") << "\n";
  o << "damping = " << damping_name(c.model.damping) << "\n";
  o << "damping_constant = " << fmt(c.model.damping_constant) << "\n";
  const bool ident = c.model.projector.kind == MultiplierKind::Sharp && std::isinf(c.model.projector.level);
  o << "projector = " << (ident ? "identity" : c.model.projector.kind == MultiplierKind::Sharp ? "sharp" : "smooth") << "\n";
  o << "projector_level = " << fmt(c.model.projector.level) << "\n";
  o << "potential = " << potential_name(c.model.potential) << "\n";
  o << "padding = " << c.model.padding << "\n";
  o << "[time]\n";
  o << "dt = " << fmt(c.dt) << "\n";
  o << "duration = " << fmt(c.duration) << "\n";
  o << "stride = " << c.stride << "\n";
  o << "[initial]\n";
  o << "kind = " << kind_name(c.initial.kind) << "\n";
  if (c.initial.kind == InitialKind::Modes) o << "modes = " << format_modes(c.initial.modes) << "\n";
  if (!c.initial.bump_center.empty()) o << "center = " << join(c.initial.bump_center) << "\n";
  o << "width = " << fmt(c.initial.bump_width) << "\n";
  o << "amplitude = " << fmt(c.initial.bump_amplitude) << "\n";
  o << "band = " << c.initial.random_band << "\n";
  if (c.initial.target_energy) o << "energy = " << fmt(*c.initial.target_energy) << "\n";
  if (c.seed) o << "seed = " << *c.seed << "\n";
  o << "[analysis]\n";
  o << "fit_window = " << fmt(c.analysis.fit_begin) << ", " << fmt(c.analysis.fit_end) << "\n";
  if (!c.analysis.sweep_levels.empty()) o << "sweep_levels = " << join(c.analysis.sweep_levels) << "\n";
  o << "energies = " << join(c.analysis.energies) << "\n";
  o << "multiplier_levels = " << join(c.analysis.multiplier_levels) << "\n";
  o << "regularization_orders = " << join(c.analysis.regularization_orders) << "\n";
  o << "lp_exponents = " << join(c.analysis.lp_exponents) << "\n";
  o << "multiplier_samples = " << c.analysis.multiplier_samples << "\n";
  o << "oracle_tolerance = " << fmt(c.analysis.oracle_tolerance) << "\n";
  return o.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : canonical_config(config)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

DomainPtr make_domain(const ExperimentConfig& config, std::optional<int> modes) {
  return std::make_shared<const BoxDomain>(config.dim, config.lengths, modes.value_or(config.modes));
}

State initial_state(const ExperimentConfig& config, const DomainPtr& domain) {
  State s(domain);
  const auto& in = config.initial;
  try {
    switch (in.kind) {
      case InitialKind::Modes:
        s = modal_state(domain, in.modes);
        break;
      case InitialKind::Bump: {
        std::vector<double> center = in.bump_center;
        if (center.empty()) {
          for (int a = 0; a < config.dim; ++a) center.push_back(0.5 * domain->length(a));
        }
        s.u = bump_profile(domain, center, in.bump_width, in.bump_amplitude);
        break;
      }
      case InitialKind::Random:
        s = random_band_limited(domain, in.random_band, config.seed.value_or(0));
        break;
    }
    const auto& p = config.model.projector;
    if (p.kind == MultiplierKind::Sharp && !p.is_identity_on(*domain)) {
      s.u = apply_multiplier(p, s.u);
      s.v = apply_multiplier(p, s.v);
    }
    if (in.target_energy) s = rescale_to_energy(s, config.model, *in.target_energy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("initial data: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("initial data: ") + e.what());
  }
  s.t = 0.0;
  return s;
}

// --- persistence ----------------------------------------------------------------

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::filesystem::filesystem_error("cannot open for writing", path, std::make_error_code(std::errc::io_error));
  out << text;
  out.close();
  if (!out) throw std::filesystem::filesystem_error("write failed", path, std::make_error_code(std::errc::io_error));
}

void write_trace_csv(const std::filesystem::path& path, const EnergyTrace& tr, const std::string& hash) {
  std::string text = "# config_hash=" + hash + "\n";
  text += kTraceHeader;
  text += '\n';
  for (std::size_t i = 0; i < tr.size(); ++i) {
    text += fmt(tr.time[i]) + ',' + fmt(tr.energy[i]) + ',' + fmt(tr.higher_energy[i]) + ',' + fmt(tr.ut_l2sq[i]) +
            ',' + fmt(tr.dissipation[i]) + ',' + fmt(tr.l10[i]) + ',' + fmt(tr.l12[i]) + ',' +
            fmt(tr.sm_defect[i]) + '\n';
  }
  write_text(path, text);
}

EnergyTrace read_trace_csv(const std::filesystem::path& path, std::string* hash) {
  std::ifstream in(path);
  if (!in) throw std::filesystem::filesystem_error("cannot open trace", path, std::make_error_code(std::errc::no_such_file_or_directory));
  std::string line;
  if (!std::getline(in, line) || line.rfind("# config_hash=", 0) != 0) {
    throw std::runtime_error("trace " + path.string() + ": missing config_hash line");
  }
  if (hash) *hash = trim(line.substr(14));
  if (!std::getline(in, line) || trim(line) != kTraceHeader) {
    throw std::runtime_error("trace " + path.string() + ": unexpected header");
  }
  EnergyTrace tr;
  std::vector<double> diss;
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 8) throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 8 columns");
    double v[8];
    for (std::size_t i = 0; i < 8; ++i) {
      try {
        v[i] = parse_real(cells[i]);
      } catch (const ConfigError&) {
        throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" + cells[i] + "'");
      }
    }
    tr.append({v[0], v[1], v[2], v[3], v[5], v[6], v[7]});
    diss.push_back(v[4]);
  }
  tr.dissipation = std::move(diss);
  try {
    tr.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("trace " + path.string() + ": " + e.what());
  }
  return tr;
}

// --- simulate ---------------------------------------------------------------------

RunOutput run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const DomainPtr domain = make_domain(config);
  const State init = initial_state(config, domain);

  SimulationOptions opts;
  opts.stride = config.stride;
  RunOutput out{{}, simulate(init, config.model, StepScheme{config.dt}, config.duration, opts)};
  const EnergyTrace& tr = out.result.trace;
  RunSummary& s = out.summary;

  s.config_hash = config_hash(config);
  s.steps = out.result.steps;
  s.samples = tr.size();
  s.initial_energy = tr.energy.front();
  s.final_energy = tr.energy.back();
  s.initial_higher_energy = tr.higher_energy.front();
  s.final_higher_energy = tr.higher_energy.back();
  const auto y = strichartz_norms(tr);
  s.strichartz_l5_l10 = y.l5_l10;
  s.strichartz_l4_l12 = y.l4_l12;
  s.max_energy_increase = max_energy_increase(tr);
  s.energy_total_variation = energy_total_variation(tr);
  s.resolution_warning = out.result.resolution_warning;

  const bool energy_damped = config.model.damping == DampingKind::EnergyCoefficient;
  if (energy_damped) s.identity_residual = energy_identity_residual(tr);
  if (config.model.damping != DampingKind::None && s.initial_energy > 0.0) {
    s.decay = try_fit(tr.time, tr.energy, config.analysis);
    if (const auto nk = try_nakao(tr)) {
      s.nakao_c1 = nk->c1;
      s.nakao_envelope_margin = nk->envelope_margin;
      s.nakao_max_n_envelope = nk->max_n_envelope;
    }
  }

  const SpectralField& uT = out.result.final_state.u;
  const double l10_3 = lp_norm(uT, 10.0, 3);
  const double l10_4 = lp_norm(uT, 10.0, 4);
  s.quadrature_estimate = l10_4 > 0.0 ? std::abs(l10_3 - l10_4) / l10_4 : 0.0;

  // Sharp-projected (or unprojected) energy damping dissipates E; Strang splitting
  // only conserves the Hamiltonian part to O(dt^2), hence the relative slack.
  const bool exact_galerkin = config.model.projector.kind == MultiplierKind::Sharp;
  if (energy_damped && exact_galerkin && s.max_energy_increase > 1e-8 * s.initial_energy) {
    s.violations.push_back("energy_increase");
  }
  if (energy_damped && !config.model.quintic && s.initial_energy > 0.0) {
    if (!check_lower_bound(tr.time, tr.energy).holds) s.violations.push_back("lower_bound");
  }
  if (s.nakao_envelope_margin && *s.nakao_envelope_margin < 0.0) s.violations.push_back("nakao_envelope");
  if (config.initial.kind == InitialKind::Modes && config.initial.modes.empty()) {
    // zero data must stay identically zero
    for (double e : tr.energy) {
      if (e != 0.0) {
        s.violations.push_back("zero_data");
        break;
      }
    }
  }
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string summary_json(const RunSummary& s) {
  Json j;
  j["config_hash"] = s.config_hash;
  j["steps"] = s.steps;
  j["samples"] = s.samples;
  j["initial_energy"] = s.initial_energy;
  j["final_energy"] = s.final_energy;
  j["initial_higher_energy"] = s.initial_higher_energy;
  j["final_higher_energy"] = s.final_higher_energy;
  j["decay_fit"] = fit_json(s.decay);
  Json nk;
  nk["c1"] = opt(s.nakao_c1);
  nk["envelope_margin"] = opt(s.nakao_envelope_margin);
  nk["max_n_envelope"] = opt(s.nakao_max_n_envelope);
  j["nakao"] = nk;
  Json st;
  st["l5_l10"] = s.strichartz_l5_l10;
  st["l4_l12"] = s.strichartz_l4_l12;
  j["strichartz"] = st;
  Json id;
  id["residual"] = s.identity_residual;
  id["max_energy_increase"] = s.max_energy_increase;
  id["total_variation"] = s.energy_total_variation;
  j["energy_identity"] = id;
  j["quadrature_estimate"] = s.quadrature_estimate;
  j["resolution_warning"] = s.resolution_warning;
  j["violations"] = s.violations;
  return j.dump(2) + "\n";
}

RunSummary run_simulate(const ExperimentConfig& config, const std::filesystem::path& out) {
  RunOutput r = run_experiment(config);
  std::filesystem::create_directories(out);
  write_trace_csv(out / "trace.csv", r.result.trace, r.summary.config_hash);
  write_text(out / "summary.json", summary_json(r.summary));
  return r.summary;
}

// --- sweep ------------------------------------------------------------------------

SweepReport run_convergence_sweep(const ExperimentConfig& config, std::span<const int> levels) {
  config.validate();
  SweepReport rep;
  rep.config_hash = config_hash(config);
  if (levels.empty()) return rep;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw ConfigError("sweep levels must increase");
  }
  if (levels.front() < 4) throw ConfigError("sweep levels must be >= 4");

  const DomainPtr top = make_domain(config, levels.back());
  const State common = initial_state(config, top);

  struct Member {
    State final_state;
    StrichartzAccumulator y;
    double energy;
    bool warning;
  };
  std::vector<std::future<Member>> jobs;
  for (int level : levels) {
    jobs.push_back(std::async(std::launch::async, [&config, &common, level] {
      const DomainPtr d = make_domain(config, level);
      SimulationOptions opts;
      opts.stride = config.stride;
      auto r = simulate(transfer(common, d), config.model, StepScheme{config.dt}, config.duration, opts);
      return Member{r.final_state, strichartz_norms(r.trace), r.trace.energy.back(), r.resolution_warning};
    }));
  }
  std::vector<Member> members;
  for (auto& j : jobs) members.push_back(j.get());

  for (std::size_t i = 0; i < members.size(); ++i) {
    SweepRow row;
    row.level = levels[i];
    row.l5_l10 = members[i].y.l5_l10;
    row.l4_l12 = members[i].y.l4_l12;
    row.final_energy = members[i].energy;
    row.tail_fraction = tail_fraction(members[i].final_state);
    row.under_resolved = members[i].warning || row.tail_fraction > 1e-6;
    if (i + 1 < members.size()) {
      const State& hi = members[i + 1].final_state;
      const State lo = transfer(members[i].final_state, hi.u.domain_ptr());
      row.difference = energy_distance(hi, lo);
    }
    rep.rows.push_back(row);
  }
  for (std::size_t i = 1; i + 1 < rep.rows.size(); ++i) {
    if (*rep.rows[i].difference > *rep.rows[i - 1].difference) rep.differences_decrease = false;
  }
  return rep;
}

// --- multipliers --------------------------------------------------------------------

bool MultiplierReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

MultiplierReport run_multiplier_suite(const DomainPtr& domain, const AnalysisSpec& analysis, std::uint64_t seed) {
  const auto& levels = analysis.multiplier_levels;
  if (levels.empty()) throw ConfigError("multiplier suite needs at least one level");
  MultiplierReport rep;
  rep.lp_exponent = analysis.lp_exponents.empty() ? 10.0 : analysis.lp_exponents.front();
  rep.orders = analysis.regularization_orders;

  auto samples = random_fields(domain, analysis.multiplier_samples, seed);
  // Unit basis fields make the sampled suprema exact operator norms.
  if (domain->size() <= 4096) {
    for (std::size_t k = 0; k < domain->size(); ++k) {
      samples.push_back(SpectralField::mode(domain, domain->mode_index(k), 1.0));
    }
  }

  double contraction = 0.0, commutation = 0.0, idempotence = 0.0, bound_excess = 0.0;
  double interpolation_failures = 0.0;
  std::vector<std::vector<double>> reg(rep.orders.size());
  const auto lam_sq = domain->eigenvalues();
  for (double m : levels) {
    const auto sharp = MultiplierSpec::sharp(m);
    const auto smooth = MultiplierSpec::smooth(m);
    const auto sharp2 = MultiplierSpec::sharp(2.0 * m);
    for (const auto& spec : {sharp, smooth}) {
      contraction = std::max(contraction, l2_contraction_defect(spec, samples));
      commutation = std::max(commutation, commutation_defect(spec, samples).relative);
    }
    for (double ls : lam_sq) {
      const double lo = sharp.weight(ls), mid = smooth.weight(ls), hi = sharp2.weight(ls);
      if (!(lo <= mid && mid <= hi)) interpolation_failures += 1.0;
    }
    for (std::size_t i = 0; i < std::min<std::size_t>(samples.size(), 8); ++i) {
      const auto once = apply_multiplier(sharp, samples[i]);
      const auto twice = apply_multiplier(sharp, once);
      for (std::size_t k = 0; k < once.size(); ++k) idempotence = std::max(idempotence, std::abs(once[k] - twice[k]));
    }
    MultiplierLevelRow row;
    row.level = m;
    row.sharp_lp = lp_operator_ratio(sharp, domain, rep.lp_exponent, analysis.multiplier_samples, seed + 1);
    row.smooth_lp = lp_operator_ratio(smooth, domain, rep.lp_exponent, analysis.multiplier_samples, seed + 1);
    for (std::size_t i = 0; i < rep.orders.size(); ++i) {
      const double r = regularization_ratio(smooth, rep.orders[i], samples);
      const double b = regularization_bound(smooth, rep.orders[i], *domain);
      bound_excess = std::max(bound_excess, (r - b) / b);
      row.regularization.push_back(r);
      reg[i].push_back(r);
    }
    rep.rows.push_back(row);
  }

  rep.checks.push_back({"l2_contraction", contraction <= 1.0 + 1e-12, contraction, 1.0 + 1e-12});
  rep.checks.push_back({"commutation_relative", commutation <= 1e-12, commutation, 1e-12});
  rep.checks.push_back({"interpolation_violations", interpolation_failures == 0.0, interpolation_failures, 0.0});
  rep.checks.push_back({"sharp_idempotence", idempotence == 0.0, idempotence, 0.0});
  rep.checks.push_back({"regularization_within_bound", bound_excess <= 1e-12, bound_excess, 1e-12});
  for (std::size_t i = 0; i < rep.orders.size(); ++i) {
    const auto [lo, hi] = std::minmax_element(reg[i].begin(), reg[i].end());
    const double spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    rep.checks.push_back({"regularization_stability_s" + fmt(rep.orders[i]), spread <= 2.0, spread, 2.0});
  }

  // Band-limited input ending at the second level: both kinds must reproduce it
  // exactly from that level on, since chi = 1 on [0, 1].
  const double band_level = levels.size() > 1 ? levels[1] : levels[0];
  const auto band = apply_multiplier(MultiplierSpec::sharp(band_level), random_field(domain, seed + 2));
  const std::vector<double> conv_levels(levels.begin(), levels.end());
  for (MultiplierKind kind : {MultiplierKind::Sharp, MultiplierKind::Smooth}) {
    const auto def = convergence_defect(kind, conv_levels, band);
    bool monotone = true;
    for (std::size_t i = 1; i < def.size(); ++i) monotone = monotone && def[i] <= def[i - 1];
    const auto zero = std::find(def.begin(), def.end(), 0.0);
    const bool stays_zero = zero != def.end() && std::all_of(zero, def.end(), [](double x) { return x == 0.0; });
    const double first_zero = zero == def.end() ? std::numeric_limits<double>::infinity()
                                                : conv_levels[static_cast<std::size_t>(zero - def.begin())];
    rep.checks.push_back({std::string("convergence_exact_") + (kind == MultiplierKind::Sharp ? "sharp" : "smooth"),
                          monotone && stays_zero, first_zero, band_level});
  }
  return rep;
}

// --- decay study ------------------------------------------------------------------------

DecayStudyReport run_decay_study(const ExperimentConfig& config) {
  config.validate();
  if (config.model.damping == DampingKind::None) throw ConfigError("decay-study requires damping");
  DecayStudyReport rep;
  rep.config_hash = config_hash(config);
  const AnalysisSpec& a = config.analysis;
  const bool linear_energy = !config.model.quintic && config.model.damping == DampingKind::EnergyCoefficient;

  auto analyse = [&a](DecayStudyRow row, std::span<const double> t, std::span<const double> e) {
    row.lower = check_lower_bound(t, e);
    if (row.lower.first_violation) row.first_violation_time = t[*row.lower.first_violation];
    row.sandwich_mu = fit_sandwich_mu(t, e, e.front());
    const EnergyTrace tr = energy_only_trace(t, e);
    row.max_energy_increase = max_energy_increase(tr);
    if (const auto nk = try_nakao(tr)) {
      row.nakao_c1 = nk->c1;
      row.nakao_envelope_margin = nk->envelope_margin;
      row.nakao_max_n_envelope = nk->max_n_envelope;
    }
    row.decay = try_fit(t, e, a);
    return row;
  };

  std::vector<std::future<DecayStudyRow>> jobs;
  for (double e0 : a.energies) {
    jobs.push_back(std::async(std::launch::async, [&, e0] {
      DecayStudyRow row;
      row.model = "bt";
      row.e0 = e0;
      row.lower_bound_asserted = true;
      const BTParams p{};
      const auto bt = single_mode_bt(p, std::sqrt(2.0 * e0 / p.lambda), 0.0, config.dt, config.duration, config.stride);
      return analyse(row, bt.time, bt.energy);
    }));
    jobs.push_back(std::async(std::launch::async, [&, e0] {
      ExperimentConfig c = config;
      c.initial.target_energy = e0;
      const DomainPtr d = make_domain(c);
      SimulationOptions opts;
      opts.stride = c.stride;
      opts.strichartz_norms = false;
      const auto r = simulate(initial_state(c, d), c.model, StepScheme{c.dt}, c.duration, opts);
      DecayStudyRow row;
      row.model = "pde";
      row.e0 = e0;
      row.lower_bound_asserted = linear_energy;
      return analyse(row, r.trace.time, r.trace.energy);
    }));
  }
  for (auto& j : jobs) rep.rows.push_back(j.get());

  for (const auto& row : rep.rows) {
    if (row.lower_bound_asserted && !row.lower.holds) {
      rep.ok = false;
      std::ostringstream msg;
      msg << "lower bound violated: model=" << row.model << " e0=" << fmt(row.e0)
          << " sample=" << *row.lower.first_violation << " t=" << fmt(*row.first_violation_time);
      rep.failure = msg.str();
      break;
    }
  }
  return rep;
}

// --- nakao re-analysis --------------------------------------------------------------------

NakaoSummary run_nakao(const ExperimentConfig& config, const std::filesystem::path& trace_path) {
  std::string found;
  const EnergyTrace tr = read_trace_csv(trace_path, &found);
  NakaoSummary s;
  s.config_hash = config_hash(config);
  if (found != s.config_hash) {
    throw HashMismatch("trace " + trace_path.string() + " has config_hash " + found + ", config gives " + s.config_hash);
  }
  const NakaoReport nk = nakao_inequality_constant(tr);
  s.c1 = nk.c1;
  s.envelope_margin = nk.envelope_margin;
  s.max_n_envelope = nk.max_n_envelope;
  s.windows = nk.windows.size();
  s.windows_used = static_cast<std::size_t>(std::count_if(nk.windows.begin(), nk.windows.end(),
                                                          [](const NakaoWindow& w) { return w.used; }));
  return s;
}

// --- oracle -------------------------------------------------------------------------------

OracleReport run_oracle_check(const ExperimentConfig& config) {
  config.validate();
  if (config.dim != 1 || config.modes > 4) throw ConfigError("oracle-check needs dim = 1 and at most 4 modes");
  const DomainPtr d = make_domain(config);
  const State init = initial_state(config, d);
  SimulationOptions opts;
  opts.stride = config.stride;
  opts.record_snapshots = true;
  opts.strichartz_norms = false;
  opts.growth_tolerance = std::numeric_limits<double>::infinity();
  const auto r = simulate(init, config.model, StepScheme{config.dt}, config.duration, opts);
  const auto ref = reference_trajectory(init, config.model, r.trace.time);
  OracleReport rep;
  rep.config_hash = config_hash(config);
  rep.deviation = sup_deviation(r.snapshots, ref);
  rep.tolerance = config.analysis.oracle_tolerance;
  rep.samples = ref.size();
  rep.pass = rep.deviation <= rep.tolerance;
  return rep;
}

// --- JSON ----------------------------------------------------------------------------------

std::string to_json(const SweepReport& r) {
  Json j;
  j["config_hash"] = r.config_hash;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["level"] = row.level;
    x["difference"] = opt(row.difference);
    x["l5_l10"] = row.l5_l10;
    x["l4_l12"] = row.l4_l12;
    x["final_energy"] = row.final_energy;
    x["tail_fraction"] = row.tail_fraction;
    x["under_resolved"] = row.under_resolved;
    rows.push_back(x);
  }
  j["rows"] = rows;
  j["differences_decrease"] = r.differences_decrease;
  return j.dump(2) + "\n";
}

std::string to_json(const MultiplierReport& r) {
  Json j;
  j["lp_exponent"] = r.lp_exponent;
  j["orders"] = r.orders;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["level"] = row.level;
    x["sharp_lp_ratio"] = row.sharp_lp;
    x["smooth_lp_ratio"] = row.smooth_lp;
    x["regularization"] = row.regularization;
    rows.push_back(x);
  }
  j["levels"] = rows;
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json x;
    x["name"] = c.name;
    x["pass"] = c.pass;
    x["measured"] = c.measured;
    x["threshold"] = c.threshold;
    checks.push_back(x);
  }
  j["checks"] = checks;
  j["all_pass"] = r.all_pass();
  return j.dump(2) + "\n";
}

std::string to_json(const DecayStudyReport& r) {
  Json j;
  j["config_hash"] = r.config_hash;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["model"] = row.model;
    x["e0"] = row.e0;
    x["lower_bound_asserted"] = row.lower_bound_asserted;
    x["lower_bound_holds"] = row.lower.holds;
    x["lower_bound_min_ratio"] = row.lower.min_ratio;
    x["first_violation_time"] = opt(row.first_violation_time);
    x["sandwich_mu"] = row.sandwich_mu;
    x["nakao_c1"] = opt(row.nakao_c1);
    x["nakao_envelope_margin"] = opt(row.nakao_envelope_margin);
    x["nakao_max_n_envelope"] = opt(row.nakao_max_n_envelope);
    x["decay_fit"] = fit_json(row.decay);
    x["max_energy_increase"] = row.max_energy_increase;
    rows.push_back(x);
  }
  j["rows"] = rows;
  j["ok"] = r.ok;
  j["failure"] = r.failure;
  return j.dump(2) + "\n";
}

std::string to_json(const NakaoSummary& s) {
  Json j;
  j["config_hash"] = s.config_hash;
  j["c1"] = s.c1;
  j["envelope_margin"] = s.envelope_margin;
  j["max_n_envelope"] = s.max_n_envelope;
  j["windows"] = s.windows;
  j["windows_used"] = s.windows_used;
  return j.dump(2) + "\n";
}

std::string to_json(const OracleReport& r) {
  Json j;
  j["config_hash"] = r.config_hash;
  j["deviation"] = r.deviation;
  j["tolerance"] = r.tolerance;
  j["samples"] = r.samples;
  j["pass"] = r.pass;
  return j.dump(2) + "\n";
}

}  // namespace critwave
