#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "critwave/energy_trace.hpp"
#include "critwave/multipliers.hpp"
#include "critwave/spectral_field.hpp"

namespace critwave {

/// Dynamical variable (u, u_t) at time t.
struct State {
  SpectralField u;
  SpectralField v;
  double t = 0.0;

  explicit State(DomainPtr domain) : u(domain), v(domain) {}
  State(SpectralField u_, SpectralField v_, double t_ = 0.0);

  const BoxDomain& domain() const { return u.domain(); }
  bool is_finite() const { return u.is_finite() && v.is_finite() && std::isfinite(t); }
};

enum class DampingKind { EnergyCoefficient, None, Constant };

/// Whether (1/6)||u||_6^6 enters E. Auto includes it exactly when the quintic is on.
enum class PotentialTerm { Auto, Include, Exclude };

struct ModelConfig {
  bool quintic = true;
  DampingKind damping = DampingKind::EnergyCoefficient;
  double damping_constant = 0.0;
  /// Applied to the spectral projection of u^5: Sharp gives the Galerkin system
  /// P_m(u^5), Smooth gives the regularized S_m(u^5).
  MultiplierSpec projector = MultiplierSpec::identity();
  PotentialTerm potential = PotentialTerm::Auto;
  /// Oversampling of the physical grid for products; 3 makes u^5 and u^6 exact.
  int padding = 3;

  bool potential_in_energy() const { return quintic && potential != PotentialTerm::Exclude; }
  void validate() const;

  static ModelConfig linear_damped() {
    ModelConfig c;
    c.quintic = false;
    return c;
  }
};

/// Symmetric Strang composition D(dt/2) K(dt/2) L(dt) K(dt/2) D(dt/2) where L
/// is the exact wave rotation, K the quintic kick and D the damping flow.
struct StepScheme {
  double dt = 1e-3;

  /// dt * lambda_max < pi. Advisory only: every substep is exact.
  bool resolves(const BoxDomain& domain) const;
};

/// integral u^6 on the padded grid (exact for padding >= 3).
double sextic_integral(const SpectralField& u, int padding = 3);

/// E = 1/2 (||grad u||^2 + ||u_t||^2) [+ 1/6 ||u||_6^6].
double total_energy(const State& s, const ModelConfig& config);

/// E_1 = 1/2 (sum lambda_k^2 v_k^2 + sum lambda_k^4 u_k^2).
double higher_energy(const State& s);

/// projector applied to the spectral projection of u^5, computed pointwise on
/// the padded grid. No aliasing for padding >= 3.
SpectralField quintic_term(const SpectralField& u, const MultiplierSpec& projector, int padding = 3);

/// Exact solution at time dt of K' = -2 K (P + K), K(0) = kinetic0, P >= 0 fixed.
double damped_kinetic(double potential, double kinetic0, double dt);

/// sigma = sqrt(K(dt) / K(0)) in (0, 1]; 1 when K(0) = 0.
double energy_damping_factor(double potential, double kinetic0, double dt);

State linear_substep(State s, double dt);
State kick_substep(State s, double dt, const ModelConfig& config);
/// Integrates v' = -E(u, v) v with u frozen (energy damping), v' = -c v
/// (constant damping), or nothing. Time is left unchanged.
State damping_substep(State s, double dt, const ModelConfig& config);

/// One full Strang step; advances s.t by dt. Throws SimulationError on
/// non-finite output.
State step(const State& s, const StepScheme& scheme, const ModelConfig& config);

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, std::size_t step, double time)
      : std::runtime_error(what), step_(step), time_(time) {}
  std::size_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::size_t step_;
  double time_;
};

/// Stateful integrator that reuses the nonlinear evaluation at the end of one
/// step for the start of the next (both act on the same u).
class Stepper {
 public:
  Stepper(ModelConfig config, StepScheme scheme);

  void advance(State& s);
  /// Energy of s, reusing the cached u^6 integral when s.u is the cached field.
  double energy(const State& s);

  const ModelConfig& config() const { return config_; }
  const StepScheme& scheme() const { return scheme_; }

 private:
  struct Nonlinear {
    std::vector<double> u;  // coefficients the cache was built for
    SpectralField force;
    double sextic = 0.0;
  };

  const Nonlinear& nonlinear(const SpectralField& u);
  void damp(State& s, double dt);
  void kick(State& s, double dt);
  void rotate(State& s);

  ModelConfig config_;
  StepScheme scheme_;
  std::vector<Nonlinear> cache_;  // holds at most one entry
  // Per-mode rotation table for dt, rebuilt when the domain changes.
  DomainPtr rotation_domain_;
  std::vector<double> omega_, cos_, sin_;
};

struct SimulationOptions {
  int stride = 1;
  bool record_snapshots = false;
  /// Evaluate ||u||_10 and ||u||_12 at each sample (one extra transform per sample).
  bool strichartz_norms = true;
  /// Abort when E exceeds E(0) * (1 + growth_tolerance) + 1e-300.
  double growth_tolerance = 1e-2;
};

struct SimulationResult {
  EnergyTrace trace;
  std::vector<State> snapshots;
  State final_state;
  std::size_t steps = 0;
  bool resolution_warning = false;
};

/// Advances `initial` to initial.t + duration with the Strang scheme, sampling
/// every `stride` steps plus the final step. Deterministic in its inputs.
SimulationResult simulate(const State& initial, const ModelConfig& config, const StepScheme& scheme,
                          double duration, const SimulationOptions& options = {});

/// Diagnostics of a single state as recorded in a trace sample.
EnergyTrace::Sample sample_state(const State& s, const ModelConfig& config, bool strichartz_norms,
                                 double energy);

// ---------------------------------------------------------------------------
// Single-mode Balakrishnan-Taylor model  x'' + lambda x + d E x' = 0,
// E = 1/2 (x'^2 + lambda x^2).

struct BTParams {
  double lambda = 1.0;
  double d = 1.0;
};

struct BTTrajectory {
  std::vector<double> time;
  std::vector<double> x;
  std::vector<double> xdot;
  std::vector<double> energy;
};

double bt_energy(const BTParams& params, double x, double xdot);

/// Same Strang splitting as the PDE: damping half steps around an exact rotation.
BTTrajectory single_mode_bt(const BTParams& params, double x0, double xdot0, double dt, double duration,
                            int stride = 1);

/// (1/E0 + 2t)^{-1}: the lower bound on energy-damped decay.
double linear_lower_bound(double e0, double t);

struct SandwichBounds {
  double lower;
  double upper;
};

/// lower = (4t + 1/E0)^{-1}, upper = ((t-1)^+/mu + 1/E0)^{-1}.
SandwichBounds linear_sandwich_bounds(double e0, double mu, double t);

}  // namespace critwave
