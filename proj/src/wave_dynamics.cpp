#include "critwave/wave_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace critwave {

State::State(SpectralField u_, SpectralField v_, double t_) : u(std::move(u_)), v(std::move(v_)), t(t_) {
  if (!u.same_domain(v)) throw std::invalid_argument("State: u and v live on different domains");
}

void ModelConfig::validate() const {
  if (padding < 1) throw std::invalid_argument("ModelConfig: padding must be >= 1");
  if (damping == DampingKind::Constant && !(damping_constant >= 0.0)) {
    throw std::invalid_argument("ModelConfig: constant damping must be >= 0");
  }
  if (!(projector.level > 0.0)) throw std::invalid_argument("ModelConfig: projector level must be > 0");
}

bool StepScheme::resolves(const BoxDomain& domain) const {
  return dt * std::sqrt(domain.max_eigenvalue()) < std::numbers::pi;
}

double sextic_integral(const SpectralField& u, int padding) { return lp_integral(to_physical(u, padding), 6.0); }

double total_energy(const State& s, const ModelConfig& config) {
  double e = 0.5 * (gradient_norm_squared(s.u) + s.v.l2_norm_squared());
  if (config.potential_in_energy()) e += sextic_integral(s.u, config.padding) / 6.0;
  return e;
}

double higher_energy(const State& s) {
  const auto lam = s.domain().eigenvalues();
  double sum = 0.0;
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    sum += lam[i] * s.v[i] * s.v[i] + lam[i] * lam[i] * s.u[i] * s.u[i];
  }
  return 0.5 * sum;
}

SpectralField quintic_term(const SpectralField& u, const MultiplierSpec& projector, int padding) {
  PhysicalField g = to_physical(u, padding);
  for (double& x : g.values()) {
    const double x2 = x * x;
    x *= x2 * x2;
  }
  SpectralField q = to_spectral(g);
  if (projector.is_identity_on(u.domain())) return q;
  return apply_multiplier(projector, q);
}

double damped_kinetic(double potential, double kinetic0, double dt) {
  if (kinetic0 <= 0.0) return 0.0;
  if (potential <= 0.0) return kinetic0 / (1.0 + 2.0 * kinetic0 * dt);
  const double decay = std::exp(-2.0 * potential * dt);
  return potential * kinetic0 * decay / (potential - kinetic0 * std::expm1(-2.0 * potential * dt));
}

double energy_damping_factor(double potential, double kinetic0, double dt) {
  if (kinetic0 <= 0.0) return 1.0;
  return std::sqrt(damped_kinetic(potential, kinetic0, dt) / kinetic0);
}

namespace {

void rotate_mode(double& u, double& v, double omega, double c, double s) {
  const double u0 = u;
  u = u0 * c + v * s / omega;
  v = -omega * u0 * s + v * c;
}

void apply_damping(State& s, double dt, const ModelConfig& config, double sextic) {
  switch (config.damping) {
    case DampingKind::None:
      return;
    case DampingKind::Constant:
      s.v *= std::exp(-config.damping_constant * dt);
      return;
    case DampingKind::EnergyCoefficient: {
      double potential = 0.5 * gradient_norm_squared(s.u);
      if (config.potential_in_energy()) potential += sextic / 6.0;
      const double kinetic = 0.5 * s.v.l2_norm_squared();
      s.v *= energy_damping_factor(potential, kinetic, dt);
      return;
    }
  }
}

}  // namespace

State linear_substep(State s, double dt) {
  const auto lam = s.domain().eigenvalues();
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    const double omega = std::sqrt(lam[i]);
    rotate_mode(s.u[i], s.v[i], omega, std::cos(omega * dt), std::sin(omega * dt));
  }
  return s;
}

State kick_substep(State s, double dt, const ModelConfig& config) {
  if (!config.quintic || dt == 0.0) return s;
  s.v -= dt * quintic_term(s.u, config.projector, config.padding);
  return s;
}

State damping_substep(State s, double dt, const ModelConfig& config) {
  const bool needs_sextic = config.damping == DampingKind::EnergyCoefficient && config.potential_in_energy();
  apply_damping(s, dt, config, needs_sextic ? sextic_integral(s.u, config.padding) : 0.0);
  return s;
}

State step(const State& s, const StepScheme& scheme, const ModelConfig& config) {
  Stepper stepper(config, scheme);
  State out = s;
  stepper.advance(out);
  return out;
}

Stepper::Stepper(ModelConfig config, StepScheme scheme) : config_(std::move(config)), scheme_(scheme) {
  config_.validate();
  if (!(scheme_.dt > 0.0)) throw std::invalid_argument("StepScheme: dt must be positive");
}

const Stepper::Nonlinear& Stepper::nonlinear(const SpectralField& u) {
  const auto c = u.coeffs();
  if (!cache_.empty() && std::equal(c.begin(), c.end(), cache_.front().u.begin(), cache_.front().u.end()) &&
      cache_.front().force.same_domain(u)) {
    return cache_.front();
  }
  PhysicalField g = to_physical(u, config_.padding);
  double sextic = 0.0;
  for (double& x : g.values()) {
    const double x2 = x * x;
    const double x5 = x * x2 * x2;
    sextic += x5 * x;
    x = x5;
  }
  sextic *= g.cell_volume();
  SpectralField force = to_spectral(g);
  if (!config_.projector.is_identity_on(u.domain())) force = apply_multiplier(config_.projector, force);
  cache_.clear();
  cache_.push_back(Nonlinear{std::vector<double>(c.begin(), c.end()), std::move(force), sextic});
  return cache_.front();
}

void Stepper::damp(State& s, double dt) {
  const bool needs_sextic = config_.damping == DampingKind::EnergyCoefficient && config_.potential_in_energy();
  apply_damping(s, dt, config_, needs_sextic ? nonlinear(s.u).sextic : 0.0);
}

void Stepper::kick(State& s, double dt) {
  if (!config_.quintic) return;
  const SpectralField& force = nonlinear(s.u).force;
  for (std::size_t i = 0; i < s.v.size(); ++i) s.v[i] -= dt * force[i];
}

void Stepper::rotate(State& s) {
  if (rotation_domain_ != s.u.domain_ptr()) {
    const auto lam = s.domain().eigenvalues();
    omega_.resize(lam.size());
    cos_.resize(lam.size());
    sin_.resize(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
      omega_[i] = std::sqrt(lam[i]);
      cos_[i] = std::cos(omega_[i] * scheme_.dt);
      sin_[i] = std::sin(omega_[i] * scheme_.dt);
    }
    rotation_domain_ = s.u.domain_ptr();
  }
  for (std::size_t i = 0; i < s.u.size(); ++i) rotate_mode(s.u[i], s.v[i], omega_[i], cos_[i], sin_[i]);
}

void Stepper::advance(State& s) {
  const double half = 0.5 * scheme_.dt;
  damp(s, half);
  kick(s, half);
  rotate(s);
  kick(s, half);
  damp(s, half);
  s.t += scheme_.dt;
  if (!s.is_finite()) {
    std::ostringstream msg;
    msg << "non-finite state after step ending at t=" << s.t;
    throw SimulationError(msg.str(), 0, s.t);
  }
}

double Stepper::energy(const State& s) {
  double e = 0.5 * (gradient_norm_squared(s.u) + s.v.l2_norm_squared());
  if (config_.potential_in_energy()) e += nonlinear(s.u).sextic / 6.0;
  return e;
}

EnergyTrace::Sample sample_state(const State& s, const ModelConfig& config, bool strichartz_norms,
                                 double energy) {
  EnergyTrace::Sample out{s.t, energy, higher_energy(s), s.v.l2_norm_squared(), 0.0, 0.0, 0.0};
  if (strichartz_norms) {
    const PhysicalField g = to_physical(s.u, std::max(config.padding, 3));
    double s10 = 0.0, s12 = 0.0;
    for (double x : g.values()) {
      const double x2 = x * x;
      const double x4 = x2 * x2;
      const double x10 = x4 * x4 * x2;
      s10 += x10;
      s12 += x10 * x2;
    }
    out.l10 = std::pow(s10 * g.cell_volume(), 0.1);
    out.l12 = std::pow(s12 * g.cell_volume(), 1.0 / 12.0);
  }
  if (config.quintic && !config.projector.is_identity_on(s.domain())) {
    const SpectralField raw = quintic_term(s.u, MultiplierSpec::identity(), config.padding);
    const auto w = config.projector.weights(s.domain());
    double defect = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) defect += (w[i] - 1.0) * raw[i] * s.v[i];
    out.sm_defect = defect;
  }
  return out;
}

SimulationResult simulate(const State& initial, const ModelConfig& config, const StepScheme& scheme,
                          double duration, const SimulationOptions& options) {
  if (!(duration > 0.0)) throw std::invalid_argument("simulate: duration must be positive");
  if (options.stride < 1) throw std::invalid_argument("simulate: stride must be >= 1");
  if (!initial.is_finite()) throw std::invalid_argument("simulate: non-finite initial state");
  const double ratio = duration / scheme.dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::abs(static_cast<double>(steps) - ratio) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("simulate: duration must be a positive integer multiple of dt");
  }

  Stepper stepper(config, scheme);
  SimulationResult result{EnergyTrace{}, {}, initial, steps, !scheme.resolves(initial.domain())};
  State& s = result.final_state;
  const double t0 = initial.t;
  const double e0 = stepper.energy(s);
  const double ceiling = e0 * (1.0 + options.growth_tolerance) + 1e-300;

  auto record = [&](double energy) {
    result.trace.append(sample_state(s, config, options.strichartz_norms, energy));
    if (options.record_snapshots) result.snapshots.push_back(s);
  };
  record(e0);

  for (std::size_t i = 1; i <= steps; ++i) {
    try {
      stepper.advance(s);
    } catch (const SimulationError& err) {
      throw SimulationError(err.what(), i, err.time());
    }
    s.t = t0 + static_cast<double>(i) * scheme.dt;
    const double e = stepper.energy(s);
    if (!(e <= ceiling)) {
      std::ostringstream msg;
      msg << "energy growth at step " << i << " (t=" << s.t << "): E=" << e << " exceeds E(0)=" << e0
          << " by more than the tolerance " << options.growth_tolerance;
      throw SimulationError(msg.str(), i, s.t);
    }
    if (i % static_cast<std::size_t>(options.stride) == 0 || i == steps) record(e);
  }
  return result;
}

double bt_energy(const BTParams& params, double x, double xdot) {
  return 0.5 * (xdot * xdot + params.lambda * x * x);
}

BTTrajectory single_mode_bt(const BTParams& params, double x0, double xdot0, double dt, double duration,
                            int stride) {
  if (!(params.lambda > 0.0) || !(params.d >= 0.0)) {
    throw std::invalid_argument("single_mode_bt: need lambda > 0 and d >= 0");
  }
  if (!(dt > 0.0) || !(duration > 0.0) || stride < 1) {
    throw std::invalid_argument("single_mode_bt: dt, duration and stride must be positive");
  }
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  const double omega = std::sqrt(params.lambda);
  const double c = std::cos(omega * dt), s = std::sin(omega * dt);
  const double half = 0.5 * dt * params.d;

  BTTrajectory out;
  double x = x0, xd = xdot0;
  auto record = [&](double t) {
    out.time.push_back(t);
    out.x.push_back(x);
    out.xdot.push_back(xd);
    out.energy.push_back(bt_energy(params, x, xd));
  };
  auto damp = [&] { xd *= energy_damping_factor(0.5 * params.lambda * x * x, 0.5 * xd * xd, half); };

  record(0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    damp();
    rotate_mode(x, xd, omega, c, s);
    damp();
    if (i % static_cast<std::size_t>(stride) == 0 || i == steps) record(static_cast<double>(i) * dt);
  }
  return out;
}

double linear_lower_bound(double e0, double t) {
  if (!(e0 > 0.0)) throw std::invalid_argument("linear_lower_bound: E0 must be positive");
  return 1.0 / (1.0 / e0 + 2.0 * t);
}

SandwichBounds linear_sandwich_bounds(double e0, double mu, double t) {
  if (!(e0 > 0.0)) throw std::invalid_argument("linear_sandwich_bounds: E0 must be positive");
  if (!(mu > 0.0)) throw std::invalid_argument("linear_sandwich_bounds: mu must be positive");
  return {1.0 / (4.0 * t + 1.0 / e0), 1.0 / (std::max(t - 1.0, 0.0) / mu + 1.0 / e0)};
}

}  // namespace critwave
