#include "critwave/initial_data.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace critwave {

State modal_state(DomainPtr domain, std::span<const ModeAmplitude> modes) {
  State s(domain);
  for (const auto& m : modes) {
    s.u.at(m.k) += m.u;
    s.v.at(m.k) += m.v;
  }
  return s;
}

SpectralField bump_profile(DomainPtr domain, std::span<const double> center, double width, double amplitude,
                           int quadrature_padding) {
  const BoxDomain& d = *domain;
  if (center.size() != static_cast<std::size_t>(d.dim())) {
    throw std::invalid_argument("bump_profile: center needs one coordinate per axis");
  }
  if (!(width > 0.0)) throw std::invalid_argument("bump_profile: width must be positive");
  for (int i = 0; i < d.dim(); ++i) {
    const double c = center[static_cast<std::size_t>(i)];
    if (c - width < 0.0 || c + width > d.length(i)) {
      throw std::invalid_argument("bump_profile: support leaves the box");
    }
  }
  PhysicalField g(domain, quadrature_padding);
  const int m = g.points_per_axis();
  std::array<int, 3> j{1, 1, 1};
  for (std::size_t p = 0; p < g.size(); ++p) {
    std::size_t rest = p;
    for (int i = d.dim() - 1; i >= 0; --i) {
      j[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<std::size_t>(m)) + 1;
      rest /= static_cast<std::size_t>(m);
    }
    double r2 = 0.0;
    for (int i = 0; i < d.dim(); ++i) {
      const double dx = (g.coordinate(i, j[static_cast<std::size_t>(i)]) - center[static_cast<std::size_t>(i)]) / width;
      r2 += dx * dx;
    }
    g[p] = r2 < 1.0 ? amplitude * std::exp(1.0 - 1.0 / (1.0 - r2)) : 0.0;
  }
  return to_spectral(g);
}

State random_band_limited(DomainPtr domain, int band, std::uint64_t seed) {
  if (band < 1) throw std::invalid_argument("random_band_limited: band must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  State s(domain);
  const BoxDomain& d = *domain;
  for (std::size_t f = 0; f < d.size(); ++f) {
    const ModeIndex k = d.mode_index(f);
    bool inside = true;
    for (int i = 0; i < d.dim(); ++i) inside = inside && k[i] <= band;
    if (!inside) continue;
    const double lam2 = d.eigenvalue(f);
    s.u[f] = normal(rng) / lam2;
    s.v[f] = normal(rng) / std::sqrt(lam2);
  }
  return s;
}

State rescale_to_energy(const State& s, const ModelConfig& config, double target) {
  if (!(target >= 0.0)) throw std::invalid_argument("rescale_to_energy: target must be >= 0");
  const double quadratic = 0.5 * (gradient_norm_squared(s.u) + s.v.l2_norm_squared());
  const double sextic = config.potential_in_energy() ? sextic_integral(s.u, config.padding) / 6.0 : 0.0;
  if (quadratic <= 0.0 && sextic <= 0.0) {
    if (target == 0.0) return s;
    throw std::invalid_argument("rescale_to_energy: cannot rescale zero data to positive energy");
  }
  auto energy = [&](double a) {
    const double a2 = a * a;
    return a2 * quadratic + a2 * a2 * a2 * sextic;
  };
  double lo = 0.0;
  double hi = quadratic > 0.0 ? std::sqrt(target / quadratic) : std::pow(target / sextic, 1.0 / 6.0);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (energy(mid) < target ? lo : hi) = mid;
  }
  const double a = std::abs(energy(lo) - target) <= std::abs(energy(hi) - target) ? lo : hi;
  State out = s;
  out.u *= a;
  out.v *= a;
  return out;
}

SpectralField transfer(const SpectralField& f, const DomainPtr& target) {
  const BoxDomain& src = f.domain();
  if (src.dim() != target->dim() || src.lengths() != target->lengths()) {
    throw std::invalid_argument("transfer: domains differ in geometry");
  }
  SpectralField out(target);
  const int n = std::min(src.modes(), target->modes());
  for (std::size_t i = 0; i < src.size(); ++i) {
    const ModeIndex k = src.mode_index(i);
    bool inside = true;
    for (int a = 0; a < src.dim(); ++a) inside = inside && k[a] <= n;
    if (inside) out.at(k) = f[i];
  }
  return out;
}

State transfer(const State& s, const DomainPtr& target) {
  return State(transfer(s.u, target), transfer(s.v, target), s.t);
}

}  // namespace critwave
