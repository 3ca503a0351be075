#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "critwave/energy_trace.hpp"

namespace critwave {

// --- energy identity -------------------------------------------------------

/// max_i |E(t_i) - E(t_0) + int_{t_0}^{t_i} E ||u_t||^2 ds| with the integral
/// taken by the trapezoid rule over the recorded samples.
double energy_identity_residual(const EnergyTrace& trace);

/// Total variation sum |E_{i+1} - E_i| of the sampled energy.
double energy_total_variation(const EnergyTrace& trace);

/// Largest increase E_{i+1} - E_i over consecutive samples (<= 0 for a monotone trace).
double max_energy_increase(const EnergyTrace& trace);

/// E at time t by linear interpolation between samples. Throws std::out_of_range
/// outside the trace.
double energy_at(const EnergyTrace& trace, double t);

// --- Nakao analysis --------------------------------------------------------

/// D(t)^2 = E(t) - E(t+1), endpoints interpolated linearly.
double nakao_window(const EnergyTrace& trace, double t);

struct NakaoWindow {
  double start;
  double dissipation;  ///< D(t)^2
  double sup_energy;   ///< sup over [t, t+1] of the sampled / interpolated E
  bool used;           ///< false when D^2 fell below the degeneracy floor
};

struct NakaoReport {
  std::vector<NakaoWindow> windows;
  double c1 = 0.0;               ///< max over used windows of sup E^2 / D^2
  std::vector<double> envelope;  ///< envelope seeded with E at the first window start
  double envelope_margin = 0.0;  ///< min_n (envelope_n - E(t_0 + n)); >= 0 when it dominates
  double max_n_envelope = 0.0;   ///< max_n n * envelope_n
};

/// Windows with D^2 below this fraction of E(t_0) are excluded from C_1.
inline constexpr double kNakaoFloor = 1e-14;

/// Unit windows [t_0 + n, t_0 + n + 1] covering the trace. C_1 is the largest
/// sup_{window} E^2 / (E(t) - E(t+1)). Throws std::domain_error if every window
/// is degenerate.
NakaoReport nakao_inequality_constant(const EnergyTrace& trace);

/// Envelope from E_{n+1} + E_{n+1}^2 / C_1 = E_n, E_0 = e0: the worst case
/// allowed by the difference inequality. Returns n+1 values (E_0..E_n).
std::vector<double> nakao_envelope(double e0, double c1, std::size_t n);

/// max over the sequence of n * E_n.
double envelope_decay_constant(std::span<const double> envelope);

// --- Strichartz norms ------------------------------------------------------

/// (sum_i w_i ||u(t_i)||_r^q)^{1/q} with trapezoid weights over samples
/// [first, last] (inclusive). `norms` holds ||u(t_i)||_r.
double strichartz_norm(std::span<const double> times, std::span<const double> norms, double q,
                       std::size_t first = 0, std::optional<std::size_t> last = std::nullopt);

struct StrichartzAccumulator {
  double t_begin = 0.0;
  double t_end = 0.0;
  double l5_l10 = 0.0;  ///< (int ||u||_10^5 dt)^{1/5}
  double l4_l12 = 0.0;  ///< (int ||u||_12^4 dt)^{1/4}
};

/// Both critical norms of a trace over the sample range [first, last].
StrichartzAccumulator strichartz_norms(const EnergyTrace& trace, std::size_t first = 0,
                                       std::optional<std::size_t> last = std::nullopt);

// --- higher-order energy ---------------------------------------------------

struct GronwallFit {
  double k = 0.0;              ///< fitted exponent rate
  double max_violation = 0.0;  ///< max_i E_1(t_i) - E_1(0) exp(K I(t_i)), <= 0 by construction
  bool trivial = false;        ///< K <= 0: E_1 never rose above E_1(0)
  std::size_t samples_used = 0;
};

/// Samples whose integral I(t) = int_0^t ||u||_12^4 is below this fraction of I(T) are skipped.
inline constexpr double kGronwallFloor = 1e-8;

/// K = max log(E_1(t)/E_1(0)) / I(t). Throws std::invalid_argument when E_1(0) = 0.
GronwallFit gronwall_check(const EnergyTrace& trace);

struct RegularRateFit {
  double c = 0.0;              ///< max (dE_1/dt)^+ / (E0^{1/2} Ebar_1^{5/2}), Ebar_1 the pair mean
  double max_growth = 0.0;     ///< max_i E_1(t_i) / E_1(t_0)
};

RegularRateFit regular_energy_rate_check(const EnergyTrace& trace, double e0);

// --- decay -----------------------------------------------------------------

struct DecayFit {
  double t_begin = 0.0;
  double t_end = 0.0;
  double exponent = 0.0;  ///< alpha in E ~ C0 t^alpha
  double constant = 0.0;  ///< C0
  double residual = 0.0;  ///< RMS of the log-log residuals
  std::size_t samples = 0;
};

/// Least squares of log E against log t over samples with t in [t_begin, t_end].
/// Throws std::invalid_argument on nonpositive E or t in the window, or fewer than two samples.
DecayFit decay_fit(std::span<const double> times, std::span<const double> energies, double t_begin,
                   double t_end);
DecayFit decay_fit(const EnergyTrace& trace, double t_begin, double t_end);

/// Smallest mu for which ((t-1)^+/mu + 1/E0)^{-1} >= E(t) at every sample;
/// +inf if some sample with t > 1 has E(t) >= E0.
double fit_sandwich_mu(std::span<const double> times, std::span<const double> energies, double e0);

struct LowerBoundCheck {
  bool holds = true;
  std::optional<std::size_t> first_violation;
  double min_ratio = 0.0;  ///< min_i E(t_i) / lower(t_i)
};

/// E(t_i) >= (1/E0 + 2 t_i)^{-1} (1 - slack) at every sample, with t measured from times[0].
LowerBoundCheck check_lower_bound(std::span<const double> times, std::span<const double> energies,
                                  double slack = 1e-6);

// --- bootstrap and slabs ---------------------------------------------------

struct BootstrapTrap {
  bool trapped = false;
  double peak_location = 0.0;  ///< y_peak = (1/(5C))^{1/4}
  double threshold = 0.0;      ///< f(y_peak) = (4/5) y_peak; A0 must stay below it
  double ceiling = 0.0;        ///< smallest positive root of y = A0 + C y^5 when trapped
};

BootstrapTrap bootstrap_trap(double a0, double c);

struct Slab {
  std::size_t first;
  std::size_t last;
  double t_begin;
  double t_end;
  double increment;  ///< (int_slab ||u||_10^5)^{1/5}
};

struct SlabPartition {
  std::vector<Slab> slabs;
  bool irreducible = false;  ///< a single sample panel already reaches delta
  std::optional<std::size_t> irreducible_at;
};

/// Greedy partition so that each slab's (int ||u||_10^5)^{1/5} stays strictly below delta.
/// The nonlinear trajectory's own increment stands in for the free-evolution norm.
SlabPartition slab_partition(std::span<const double> times, std::span<const double> l10, double delta);

}  // namespace critwave
