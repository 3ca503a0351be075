#include "critwave/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace critwave {
namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

void require_nonzero(const SpectralField& v, const char* who) {
  if (v.l2_norm_squared() == 0.0) throw std::invalid_argument(std::string(who) + ": zero sample field");
}

}  // namespace

double cutoff_profile(double s) {
  const double a = std::abs(s);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = psi(2.0 - a);
  const double down = psi(a - 1.0);
  return up / (up + down);
}

double MultiplierSpec::weight(double lambda_sq) const {
  const double lambda = std::sqrt(lambda_sq);
  if (kind == MultiplierKind::Sharp) return lambda <= level ? 1.0 : 0.0;
  if (std::isinf(level)) return 1.0;
  return cutoff_profile(lambda / level);
}

std::vector<double> MultiplierSpec::weights(const BoxDomain& domain) const {
  if (!(level > 0.0)) throw std::invalid_argument("MultiplierSpec: level must be positive");
  std::vector<double> w(domain.size());
  const auto lam = domain.eigenvalues();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = weight(lam[i]);
  return w;
}

bool MultiplierSpec::is_identity_on(const BoxDomain& domain) const {
  const auto w = weights(domain);
  return std::all_of(w.begin(), w.end(), [](double x) { return x == 1.0; });
}

SpectralField apply_multiplier(const MultiplierSpec& spec, const SpectralField& f) {
  const auto w = spec.weights(f.domain());
  SpectralField out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= w[i];
  return out;
}

double l2_contraction_defect(const MultiplierSpec& spec, std::span<const SpectralField> samples) {
  double worst = 0.0;
  for (const auto& v : samples) {
    require_nonzero(v, "l2_contraction_defect");
    worst = std::max(worst, apply_multiplier(spec, v).l2_norm() / v.l2_norm());
  }
  return worst;
}

CommutationDefect commutation_defect(const MultiplierSpec& spec, std::span<const SpectralField> samples) {
  CommutationDefect out;
  for (const auto& v : samples) {
    const SpectralField lhs = apply_laplacian(apply_multiplier(spec, v));
    const SpectralField rhs = apply_multiplier(spec, apply_laplacian(v));
    const double diff = (lhs - rhs).l2_norm();
    out.absolute = std::max(out.absolute, diff);
    const double scale = apply_laplacian(v).l2_norm();
    if (scale > 0.0) out.relative = std::max(out.relative, diff / scale);
  }
  return out;
}

double regularization_ratio(const MultiplierSpec& spec, double s, std::span<const SpectralField> samples) {
  if (spec.kind != MultiplierKind::Smooth) {
    throw std::invalid_argument("regularization_ratio: requires a Smooth multiplier");
  }
  if (s < 0.0) throw std::invalid_argument("regularization_ratio: s must be >= 0");
  const double scale = std::pow(spec.level, s);
  double worst = 0.0;
  for (const auto& v : samples) {
    require_nonzero(v, "regularization_ratio");
    const double hs = std::sqrt(sobolev_norm_squared(apply_multiplier(spec, v), s));
    worst = std::max(worst, hs / (scale * v.l2_norm()));
  }
  return worst;
}

double regularization_bound(const MultiplierSpec& spec, double s, const BoxDomain& domain) {
  const auto w = spec.weights(domain);
  const auto lam = domain.eigenvalues();
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    worst = std::max(worst, std::pow(1.0 + lam[i], 0.5 * s) * w[i]);
  }
  return worst / std::pow(spec.level, s);
}

std::vector<double> convergence_defect(MultiplierKind kind, std::span<const double> levels,
                                       const SpectralField& v) {
  std::vector<double> out;
  out.reserve(levels.size());
  for (double m : levels) {
    const MultiplierSpec spec{kind, m};
    out.push_back((apply_multiplier(spec, v) - v).l2_norm());
  }
  return out;
}

SpectralField random_field(DomainPtr domain, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(std::move(domain));
  for (double& c : f.coeffs()) c = normal(rng);
  return f;
}

std::vector<SpectralField> random_fields(DomainPtr domain, int count, std::uint64_t seed) {
  std::vector<SpectralField> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) out.push_back(random_field(domain, rng()));
  return out;
}

double lp_operator_ratio(const MultiplierSpec& spec, const DomainPtr& domain, double p, int count,
                         std::uint64_t seed, int padding) {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("lp_operator_ratio: need 1 < p < inf");
  double worst = 0.0;
  for (const auto& v : random_fields(domain, count, seed)) {
    const double denom = lp_norm(v, p, padding);
    if (denom == 0.0) continue;
    worst = std::max(worst, lp_norm(apply_multiplier(spec, v), p, padding) / denom);
  }
  return worst;
}

}  // namespace critwave
