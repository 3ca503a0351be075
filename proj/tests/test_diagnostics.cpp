#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "critwave/diagnostics.hpp"

using namespace critwave;

namespace {

EnergyTrace synthetic(const std::vector<double>& t, const std::vector<double>& e, double l10 = 0.0, double l12 = 0.0) {
  EnergyTrace tr;
  for (std::size_t i = 0; i < t.size(); ++i) tr.append({t[i], e[i], 0.0, 0.0, l10, l12, 0.0});
  return tr;
}

std::vector<double> grid(double a, double b, double h) {
  std::vector<double> t;
  for (int i = 0; a + i * h <= b + 1e-12; ++i) t.push_back(a + i * h);
  return t;
}

// Ordinary least squares slope of log e against log t.
double loglog_slope(const std::vector<double>& t, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = std::log(t[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("decay fit recovers an exact power law") {
  const auto t = grid(1.0, 300.0, 0.5);
  std::vector<double> e;
  for (double x : t) e.push_back(3.0 * std::pow(x, -1.3));
  const auto f = decay_fit(t, e, 10.0, 200.0);
  CHECK(f.exponent == doctest::Approx(-1.3).epsilon(1e-12));
  CHECK(f.constant == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(f.residual < 1e-12);
  CHECK(f.samples == 381);
}

TEST_CASE("decay fit of 1/(1+2t) matches an independent least-squares slope") {
  for (double hi : {100.0, 200.0, 1000.0}) {
    const auto all = grid(0.0, 1000.0, 0.1);
    std::vector<double> e, tw, ew;
    for (double x : all) {
      e.push_back(1.0 / (1.0 + 2.0 * x));
      if (x >= 10.0 - 1e-12 && x <= hi + 1e-12) {
        tw.push_back(x);
        ew.push_back(e.back());
      }
    }
    CHECK(decay_fit(all, e, 10.0, hi).exponent == doctest::Approx(loglog_slope(tw, ew)).epsilon(1e-10));
  }
  // The pre-asymptotic bias shrinks as the window moves out.
  const auto t = grid(0.0, 1000.0, 0.1);
  std::vector<double> e;
  for (double x : t) e.push_back(1.0 / (1.0 + 2.0 * x));
  CHECK(std::abs(decay_fit(t, e, 10, 1000).exponent + 1.0) < 0.01);
  CHECK(std::abs(decay_fit(t, e, 10, 1000).exponent + 1.0) < std::abs(decay_fit(t, e, 10, 100).exponent + 1.0));
}

TEST_CASE("decay fit input checks") {
  const std::vector<double> t{1, 2, 3}, e{1, 0, 1};
  CHECK_THROWS(decay_fit(t, e, 1, 3));
  CHECK_THROWS(decay_fit(t, std::vector<double>{1, 1, 1}, 2.5, 2.9));
}

TEST_CASE("Nakao envelope solves its defining recursion") {
  const auto env = nakao_envelope(1.0, 1.0, 20);
  REQUIRE(env.size() == 21);
  CHECK(env[1] == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-15));
  for (std::size_t n = 1; n < env.size(); ++n) {
    CHECK(env[n] + env[n] * env[n] / 1.0 == doctest::Approx(env[n - 1]).epsilon(1e-14));
    CHECK(env[n] < env[n - 1]);
  }
  // E_n ~ C1 / n for large n.
  const auto long_env = nakao_envelope(1.0, 2.0, 100000);
  CHECK(100000 * long_env.back() == doctest::Approx(2.0).epsilon(1e-3));
  double worst = 0.0;
  for (std::size_t n = 1; n < long_env.size(); ++n) worst = std::max(worst, static_cast<double>(n) * long_env[n]);
  CHECK(envelope_decay_constant(long_env) == worst);
  CHECK(worst < 2.1);
}

TEST_CASE("Nakao constant for E = 1/(1+t) on integer samples") {
  // sup_{[t,t+1]} E^2 / (E(t) - E(t+1)) = (2+t)/(1+t), largest at t = 0.
  std::vector<double> t, e;
  for (int i = 0; i <= 30; ++i) {
    t.push_back(i);
    e.push_back(1.0 / (1.0 + i));
  }
  const auto tr = synthetic(t, e);
  CHECK(nakao_window(tr, 0.0) == doctest::Approx(0.5));
  // Linear interpolation: E(0.5) = 3/4, E(1.5) = 5/12.
  CHECK(nakao_window(tr, 0.5) == doctest::Approx(0.75 - 5.0 / 12.0).epsilon(1e-12));
  const auto rep = nakao_inequality_constant(tr);
  CHECK(rep.c1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(rep.envelope_margin >= 0.0);
  CHECK(std::isfinite(rep.max_n_envelope));
  CHECK_THROWS_AS(nakao_window(tr, 29.5), std::out_of_range);
}

TEST_CASE("Nakao analysis refuses a trace without dissipation") {
  const auto t = grid(0.0, 5.0, 0.5);
  const auto tr = synthetic(t, std::vector<double>(t.size(), 1.0));
  CHECK_THROWS_AS(nakao_inequality_constant(tr), std::domain_error);
}

TEST_CASE("Strichartz norms by trapezoid quadrature") {
  const auto t = grid(0.0, 2.0, 0.25);
  const std::vector<double> c(t.size(), 1.5);
  CHECK(strichartz_norm(t, c, 5.0) == doctest::Approx(std::pow(2.0 * std::pow(1.5, 5), 0.2)));
  std::vector<double> lin;
  for (double x : t) lin.push_back(x);
  // Trapezoid of t^4 on h = 1/4 against the exact 32/5 plus the rule's error term.
  const double h = 0.25;
  double trap = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) trap += 0.5 * h * (std::pow(t[i], 4) + std::pow(t[i + 1], 4));
  CHECK(strichartz_norm(t, lin, 4.0) == doctest::Approx(std::pow(trap, 0.25)));
  const auto tr = synthetic(t, std::vector<double>(t.size(), 1.0), 1.5, 2.0);
  const auto y = strichartz_norms(tr);
  CHECK(y.l5_l10 == doctest::Approx(std::pow(2.0 * std::pow(1.5, 5), 0.2)));
  CHECK(y.l4_l12 == doctest::Approx(std::pow(2.0 * 16.0, 0.25)));
}

TEST_CASE("energy identity residual vanishes on an exact trace") {
  // E' = -E |u_t|^2 with |u_t|^2 = 1 gives E = e^{-t}; trapezoid error is O(h^2).
  EnergyTrace tr;
  for (double t : grid(0.0, 2.0, 1e-3)) tr.append({t, std::exp(-t), 0.0, 1.0, 0.0, 0.0, 0.0});
  CHECK(energy_identity_residual(tr) < 1e-7);
  CHECK(max_energy_increase(tr) < 0.0);
  CHECK(energy_total_variation(tr) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK(energy_at(tr, 1.0005) == doctest::Approx(0.5 * (std::exp(-1.0) + std::exp(-1.001))));
}

TEST_CASE("Gronwall fit recovers the exponent of an exponential in the L4L12 integral") {
  EnergyTrace tr;
  const double k = 0.7;
  for (double t : grid(0.0, 3.0, 1e-3)) {
    // l12 = 1 so the integral is t; E_1 = exp(k t).
    tr.append({t, 1.0, std::exp(k * t), 0.0, 0.0, 1.0, 0.0});
  }
  const auto g = gronwall_check(tr);
  CHECK(g.k == doctest::Approx(k).epsilon(1e-9));
  CHECK_FALSE(g.trivial);
  CHECK(g.max_violation <= 1e-12);
  EnergyTrace decreasing;
  for (double t : grid(0.0, 3.0, 1e-2)) decreasing.append({t, 1.0, std::exp(-t), 0.0, 0.0, 1.0, 0.0});
  CHECK(gronwall_check(decreasing).trivial);
  EnergyTrace zero;
  zero.append({0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
  zero.append({1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
  CHECK_THROWS(gronwall_check(zero));
}

TEST_CASE("regular energy rate is zero for nonincreasing E1") {
  EnergyTrace tr;
  for (double t : grid(0.0, 1.0, 0.1)) tr.append({t, 1.0, 2.0 - t, 0.0, 0.0, 0.0, 0.0});
  const auto r = regular_energy_rate_check(tr, 1.0);
  CHECK(r.c == 0.0);
  CHECK(r.max_growth == 1.0);
}

TEST_CASE("sandwich mu reproduces the exact upper profile") {
  const double mu = 0.8, e0 = 2.0;
  std::vector<double> t, e;
  for (double x : grid(0.0, 50.0, 0.5)) {
    t.push_back(x);
    e.push_back(1.0 / (std::max(x - 1.0, 0.0) / mu + 1.0 / e0));
  }
  CHECK(fit_sandwich_mu(t, e, e0) == doctest::Approx(mu).epsilon(1e-12));
  const std::vector<double> flat(t.size(), e0);
  CHECK(std::isinf(fit_sandwich_mu(t, flat, e0)));
}

TEST_CASE("lower bound check reports the first violating sample") {
  const std::vector<double> t{0, 1, 2, 3};
  std::vector<double> e;
  for (double x : t) e.push_back(1.0 / (1.0 + 2.0 * x));
  CHECK(check_lower_bound(t, e).holds);
  CHECK(check_lower_bound(t, e).min_ratio == doctest::Approx(1.0));
  e[2] *= 0.9;
  e[3] *= 0.5;
  const auto c = check_lower_bound(t, e);
  CHECK_FALSE(c.holds);
  CHECK(c.first_violation == 2);
}

TEST_CASE("bootstrap trap root and threshold") {
  const double c = 2.0;
  const auto trap = bootstrap_trap(0.2, c);
  CHECK(trap.peak_location == doctest::Approx(std::pow(1.0 / (5.0 * c), 0.25)));
  CHECK(trap.threshold == doctest::Approx(trap.peak_location - c * std::pow(trap.peak_location, 5)));
  REQUIRE(trap.trapped);
  CHECK(std::abs(0.2 + c * std::pow(trap.ceiling, 5) - trap.ceiling) <= 1e-12);
  CHECK(trap.ceiling < trap.peak_location);
  CHECK_FALSE(bootstrap_trap(0.9, c).trapped);
  CHECK(bootstrap_trap(0.0, c).ceiling == 0.0);
}

TEST_CASE("slab partition counts slabs for a constant norm") {
  // ||u||_10 = 1 on [0, 10]: a slab of length T_s carries T_s, so delta^5 = 0.255
  // fits 25 panels of 0.01 and ceil(10 / 0.255) = 40 slabs result.
  const auto t = grid(0.0, 10.0, 0.01);
  const std::vector<double> l10(t.size(), 1.0);
  const auto p = slab_partition(t, l10, std::pow(0.255, 0.2));
  CHECK(p.slabs.size() == 40);
  CHECK_FALSE(p.irreducible);
  for (const auto& s : p.slabs) CHECK(std::pow(s.increment, 5) < 0.255);
  CHECK(p.slabs.back().t_end == doctest::Approx(10.0));
  const auto tight = slab_partition(t, l10, 0.1);
  CHECK(tight.irreducible);
}
