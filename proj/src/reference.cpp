#include "critwave/reference.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace critwave {
namespace {

using Complex = std::complex<double>;

// Coefficients of s(y) = sum_k c_k sin(k y) as e^{i n y} amplitudes, n in [-N, N].
std::vector<Complex> exponential_coeffs(std::span<const double> c) {
  const int n = static_cast<int>(c.size());
  std::vector<Complex> a(static_cast<std::size_t>(2 * n + 1));
  for (int k = 1; k <= n; ++k) {
    const Complex amp = c[static_cast<std::size_t>(k - 1)] / Complex(0.0, 2.0);
    a[static_cast<std::size_t>(n + k)] = amp;
    a[static_cast<std::size_t>(n - k)] = -amp;
  }
  return a;
}

// Product of two centred exponential series.
std::vector<Complex> convolve(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == Complex{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

SpectralField exact_quintic_1d(const SpectralField& u) {
  const BoxDomain& d = u.domain();
  if (d.dim() != 1) throw std::invalid_argument("exact_quintic_1d: 1D domains only");
  const int n = d.modes();
  const auto a = exponential_coeffs(u.coeffs());
  const auto a2 = convolve(a, a);
  const auto a4 = convolve(a2, a2);
  const auto a5 = convolve(a4, a);  // centred at index 5n
  // s^5 = sum_j b_j sin(j y) with b_j = 2i A_j; with u = sqrt(2/L) s(pi x / L),
  // <u^5, phi_j> = (2/L)^3 (L/pi) (pi/2) b_j = 4 b_j / L^2.
  const double length = d.length(0);
  SpectralField q(u.domain_ptr());
  for (int j = 1; j <= n; ++j) {
    const Complex b = Complex(0.0, 2.0) * a5[static_cast<std::size_t>(5 * n + j)];
    q[static_cast<std::size_t>(j - 1)] = 4.0 * b.real() / (length * length);
  }
  return q;
}

std::vector<State> reference_trajectory(const State& initial, const ModelConfig& config,
                                        std::span<const double> times, const ReferenceOptions& options) {
  const BoxDomain& d = initial.domain();
  if (d.dim() != 1) throw std::invalid_argument("reference_trajectory: 1D domains only");
  config.validate();
  const std::size_t n = d.size();
  const auto lam = d.eigenvalues();
  const auto w = config.projector.weights(d);
  const DomainPtr domain = initial.u.domain_ptr();

  using Vec = std::vector<double>;
  auto rhs = [&](const Vec& y, Vec& dy, double /*t*/) {
    SpectralField u(domain, Vec(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n)));
    Vec q(n, 0.0);
    double sextic = 0.0;
    if (config.quintic) {
      const SpectralField raw = exact_quintic_1d(u);
      for (std::size_t k = 0; k < n; ++k) {
        q[k] = w[k] * raw[k];
        sextic += u[k] * raw[k];
      }
    }
    double gamma = 0.0;
    if (config.damping == DampingKind::Constant) gamma = config.damping_constant;
    if (config.damping == DampingKind::EnergyCoefficient) {
      double e = 0.0;
      for (std::size_t k = 0; k < n; ++k) e += 0.5 * (lam[k] * y[k] * y[k] + y[n + k] * y[n + k]);
      if (config.potential_in_energy()) e += sextic / 6.0;
      gamma = e;
    }
    for (std::size_t k = 0; k < n; ++k) {
      dy[k] = y[n + k];
      dy[n + k] = -lam[k] * y[k] - q[k] - gamma * y[n + k];
    }
  };

  Vec y(2 * n);
  std::copy(initial.u.coeffs().begin(), initial.u.coeffs().end(), y.begin());
  std::copy(initial.v.coeffs().begin(), initial.v.coeffs().end(), y.begin() + static_cast<std::ptrdiff_t>(n));

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<Vec>>(options.abs_tol, options.rel_tol);

  std::vector<State> out;
  out.reserve(times.size());
  double t = initial.t;
  for (double target : times) {
    if (target < t) throw std::invalid_argument("reference_trajectory: times must be ascending");
    if (target > t) odeint::integrate_adaptive(stepper, rhs, y, t, target, 1e-3);
    t = target;
    State s(domain);
    std::copy(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), s.u.coeffs().begin());
    std::copy(y.begin() + static_cast<std::ptrdiff_t>(n), y.end(), s.v.coeffs().begin());
    s.t = t;
    out.push_back(std::move(s));
  }
  return out;
}

double sup_deviation(std::span<const State> a, std::span<const State> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_deviation: trajectories differ in length");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].u.size(); ++k) {
      worst = std::max(worst, std::abs(a[i].u[k] - b[i].u[k]));
      worst = std::max(worst, std::abs(a[i].v[k] - b[i].v[k]));
    }
  }
  return worst;
}

}  // namespace critwave
