#include "critwave/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace critwave {
namespace {

double time_slack(double t) { return 1e-9 * std::max(1.0, std::abs(t)); }

void require_samples(const EnergyTrace& trace, std::size_t n, const char* who) {
  if (trace.size() < n) throw std::invalid_argument(std::string(who) + ": trace too short");
}

}  // namespace

double energy_identity_residual(const EnergyTrace& trace) {
  if (trace.empty()) return 0.0;
  double integral = 0.0;
  double worst = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double h = trace.time[i] - trace.time[i - 1];
    integral += 0.5 * h * (trace.energy[i - 1] * trace.ut_l2sq[i - 1] + trace.energy[i] * trace.ut_l2sq[i]);
    worst = std::max(worst, std::abs(trace.energy[i] - trace.energy[0] + integral));
  }
  return worst;
}

double energy_total_variation(const EnergyTrace& trace) {
  double tv = 0.0;
  for (std::size_t i = 1; i < trace.size(); ++i) tv += std::abs(trace.energy[i] - trace.energy[i - 1]);
  return tv;
}

double max_energy_increase(const EnergyTrace& trace) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < trace.size(); ++i) worst = std::max(worst, trace.energy[i] - trace.energy[i - 1]);
  return trace.size() < 2 ? 0.0 : worst;
}

double energy_at(const EnergyTrace& trace, double t) {
  require_samples(trace, 1, "energy_at");
  const auto& ts = trace.time;
  if (t < ts.front() - time_slack(t) || t > ts.back() + time_slack(t)) {
    throw std::out_of_range("energy_at: time " + std::to_string(t) + " outside the trace");
  }
  if (t <= ts.front()) return trace.energy.front();
  if (t >= ts.back()) return trace.energy.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - ts[lo]) / (ts[hi] - ts[lo]);
  return (1.0 - w) * trace.energy[lo] + w * trace.energy[hi];
}

double nakao_window(const EnergyTrace& trace, double t) {
  require_samples(trace, 2, "nakao_window");
  if (t < trace.time.front() - time_slack(t) || t + 1.0 > trace.time.back() + time_slack(t + 1.0)) {
    throw std::out_of_range("nakao_window: window [t, t+1] exceeds the trace");
  }
  return energy_at(trace, t) - energy_at(trace, t + 1.0);
}

NakaoReport nakao_inequality_constant(const EnergyTrace& trace) {
  require_samples(trace, 2, "nakao_inequality_constant");
  NakaoReport report;
  const double t0 = trace.time.front();
  const double e_ref = trace.energy.front();
  std::size_t cursor = 0;
  for (std::size_t n = 0;; ++n) {
    const double a = t0 + static_cast<double>(n);
    const double b = a + 1.0;
    if (b > trace.time.back() + time_slack(b)) break;
    const double ea = energy_at(trace, a);
    const double eb = energy_at(trace, b);
    double sup = std::max(ea, eb);
    while (cursor < trace.size() && trace.time[cursor] <= a) ++cursor;
    for (std::size_t i = cursor; i < trace.size() && trace.time[i] < b; ++i) sup = std::max(sup, trace.energy[i]);
    const double d2 = ea - eb;
    const bool used = d2 > 0.0 && d2 >= kNakaoFloor * e_ref;
    report.windows.push_back({a, d2, sup, used});
    if (used) report.c1 = std::max(report.c1, sup * sup / d2);
  }
  if (report.c1 == 0.0) {
    throw std::domain_error("nakao_inequality_constant: every unit window is degenerate");
  }
  report.envelope = nakao_envelope(e_ref, report.c1, report.windows.size());
  report.envelope_margin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < report.envelope.size(); ++n) {
    const double measured = energy_at(trace, t0 + static_cast<double>(n));
    report.envelope_margin = std::min(report.envelope_margin, report.envelope[n] - measured);
  }
  report.max_n_envelope = envelope_decay_constant(report.envelope);
  return report;
}

std::vector<double> nakao_envelope(double e0, double c1, std::size_t n) {
  if (e0 < 0.0) throw std::invalid_argument("nakao_envelope: E0 must be >= 0");
  if (!(c1 > 0.0)) throw std::invalid_argument("nakao_envelope: C1 must be positive");
  std::vector<double> out(n + 1);
  out[0] = e0;
  for (std::size_t i = 1; i <= n; ++i) {
    // Positive root of x + x^2 / C1 = E, written without cancellation.
    const double e = out[i - 1];
    out[i] = 2.0 * e / (1.0 + std::sqrt(1.0 + 4.0 * e / c1));
  }
  return out;
}

double envelope_decay_constant(std::span<const double> envelope) {
  double worst = 0.0;
  for (std::size_t n = 1; n < envelope.size(); ++n) worst = std::max(worst, static_cast<double>(n) * envelope[n]);
  return worst;
}

double strichartz_norm(std::span<const double> times, std::span<const double> norms, double q, std::size_t first,
                       std::optional<std::size_t> last) {
  if (norms.size() != times.size()) throw std::invalid_argument("strichartz_norm: missing norm samples");
  if (!(q >= 1.0)) throw std::invalid_argument("strichartz_norm: q must be >= 1");
  if (times.empty()) return 0.0;
  const std::size_t end = last.value_or(times.size() - 1);
  if (end >= times.size() || first > end) throw std::out_of_range("strichartz_norm: bad sample range");
  double sum = 0.0;
  for (std::size_t i = first; i < end; ++i) {
    sum += 0.5 * (times[i + 1] - times[i]) * (std::pow(norms[i], q) + std::pow(norms[i + 1], q));
  }
  return std::pow(sum, 1.0 / q);
}

StrichartzAccumulator strichartz_norms(const EnergyTrace& trace, std::size_t first, std::optional<std::size_t> last) {
  require_samples(trace, 1, "strichartz_norms");
  const std::size_t end = last.value_or(trace.size() - 1);
  return {trace.time.at(first), trace.time.at(end), strichartz_norm(trace.time, trace.l10, 5.0, first, end),
          strichartz_norm(trace.time, trace.l12, 4.0, first, end)};
}

GronwallFit gronwall_check(const EnergyTrace& trace) {
  require_samples(trace, 1, "gronwall_check");
  const double e1_0 = trace.higher_energy.front();
  if (!(e1_0 > 0.0)) throw std::invalid_argument("gronwall_check: E_1(0) must be positive");
  std::vector<double> integral(trace.size(), 0.0);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    const double h = trace.time[i] - trace.time[i - 1];
    integral[i] = integral[i - 1] + 0.5 * h * (std::pow(trace.l12[i - 1], 4) + std::pow(trace.l12[i], 4));
  }
  GronwallFit fit;
  fit.k = -std::numeric_limits<double>::infinity();
  const double floor = kGronwallFloor * integral.back();
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (!(integral[i] > floor) || integral[i] <= 0.0) continue;
    fit.k = std::max(fit.k, std::log(trace.higher_energy[i] / e1_0) / integral[i]);
    ++fit.samples_used;
  }
  if (fit.samples_used == 0) fit.k = 0.0;
  fit.trivial = fit.k <= 0.0;
  fit.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    fit.max_violation = std::max(fit.max_violation, trace.higher_energy[i] - e1_0 * std::exp(fit.k * integral[i]));
  }
  return fit;
}

RegularRateFit regular_energy_rate_check(const EnergyTrace& trace, double e0) {
  require_samples(trace, 2, "regular_energy_rate_check");
  if (!(e0 > 0.0)) throw std::invalid_argument("regular_energy_rate_check: E0 must be positive");
  RegularRateFit fit;
  const double e1_0 = trace.higher_energy.front();
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    const double rate = (trace.higher_energy[i + 1] - trace.higher_energy[i]) / (trace.time[i + 1] - trace.time[i]);
    const double mean = 0.5 * (trace.higher_energy[i] + trace.higher_energy[i + 1]);
    if (rate > 0.0 && mean > 0.0) fit.c = std::max(fit.c, rate / (std::sqrt(e0) * std::pow(mean, 2.5)));
  }
  if (e1_0 > 0.0) {
    for (double e1 : trace.higher_energy) fit.max_growth = std::max(fit.max_growth, e1 / e1_0);
  }
  return fit;
}

DecayFit decay_fit(std::span<const double> times, std::span<const double> energies, double t_begin, double t_end) {
  if (times.size() != energies.size()) throw std::invalid_argument("decay_fit: ragged input");
  if (!(t_end > t_begin)) throw std::invalid_argument("decay_fit: empty window");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_begin || t > t_end) continue;
    if (!(t > 0.0)) throw std::invalid_argument("decay_fit: window must lie in t > 0");
    if (!(energies[i] > 0.0)) throw std::invalid_argument("decay_fit: nonpositive energy in window");
    const double x = std::log(t), y = std::log(energies[i]);
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("decay_fit: fewer than two samples in window");
  const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("decay_fit: window holds a single distinct time");
  DecayFit fit;
  fit.t_begin = t_begin;
  fit.t_end = t_end;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  fit.samples = n;
  return fit;
}

DecayFit decay_fit(const EnergyTrace& trace, double t_begin, double t_end) {
  return decay_fit(trace.time, trace.energy, t_begin, t_end);
}

double fit_sandwich_mu(std::span<const double> times, std::span<const double> energies, double e0) {
  if (times.size() != energies.size()) throw std::invalid_argument("fit_sandwich_mu: ragged input");
  if (!(e0 > 0.0)) throw std::invalid_argument("fit_sandwich_mu: E0 must be positive");
  double mu = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 1.0) continue;
    const double gap = 1.0 / energies[i] - 1.0 / e0;
    if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
    mu = std::max(mu, (times[i] - 1.0) / gap);
  }
  return mu;
}

LowerBoundCheck check_lower_bound(std::span<const double> times, std::span<const double> energies, double slack) {
  if (times.size() != energies.size() || times.empty()) throw std::invalid_argument("check_lower_bound: bad input");
  LowerBoundCheck out;
  const double e0 = energies.front();
  if (!(e0 > 0.0)) throw std::invalid_argument("check_lower_bound: E0 must be positive");
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double lower = 1.0 / (1.0 / e0 + 2.0 * (times[i] - times.front()));
    out.min_ratio = std::min(out.min_ratio, energies[i] / lower);
    if (energies[i] < lower * (1.0 - slack) && out.holds) {
      out.holds = false;
      out.first_violation = i;
    }
  }
  return out;
}

BootstrapTrap bootstrap_trap(double a0, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("bootstrap_trap: C must be positive");
  if (!(a0 >= 0.0)) throw std::invalid_argument("bootstrap_trap: A0 must be >= 0");
  BootstrapTrap out;
  out.peak_location = std::pow(1.0 / (5.0 * c), 0.25);
  out.threshold = 0.8 * out.peak_location;
  out.trapped = a0 < out.threshold;
  if (!out.trapped || a0 == 0.0) return out;
  // g(y) = A0 + C y^5 - y is convex with g(0) > 0 > g(y_peak): one root in between.
  double lo = 0.0, hi = out.peak_location;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (a0 + c * std::pow(mid, 5) - mid > 0.0 ? lo : hi) = mid;
  }
  out.ceiling = 0.5 * (lo + hi);
  return out;
}

SlabPartition slab_partition(std::span<const double> times, std::span<const double> l10, double delta) {
  if (times.size() != l10.size()) throw std::invalid_argument("slab_partition: missing norm samples");
  if (!(delta > 0.0)) throw std::invalid_argument("slab_partition: delta must be positive");
  SlabPartition out;
  if (times.empty()) return out;
  const double budget = std::pow(delta, 5);
  auto close = [&](std::size_t first, std::size_t last, double acc) {
    out.slabs.push_back({first, last, times[first], times[last], std::pow(acc, 0.2)});
  };
  std::size_t start = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double panel = 0.5 * (times[i + 1] - times[i]) * (std::pow(l10[i], 5) + std::pow(l10[i + 1], 5));
    if (panel >= budget) {
      if (!out.irreducible) out.irreducible_at = i;
      out.irreducible = true;
      if (start < i) close(start, i, acc);
      close(i, i + 1, panel);
      start = i + 1;
      acc = 0.0;
    } else if (acc + panel >= budget) {
      close(start, i, acc);
      start = i;
      acc = panel;
    } else {
      acc += panel;
    }
  }
  if (start + 1 < times.size() || out.slabs.empty()) close(start, times.size() - 1, acc);
  return out;
}

}  // namespace critwave
