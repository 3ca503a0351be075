#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "critwave/spectral_field.hpp"

namespace critwave {

/// Smooth even cutoff: 1 on |s| <= 1, 0 on |s| >= 2, and on 1 < |s| < 2
///   chi(s) = psi(2 - |s|) / (psi(2 - |s|) + psi(|s| - 1)),  psi(t) = exp(-1/t).
/// C-infinity and nonincreasing in |s|.
double cutoff_profile(double s);

enum class MultiplierKind { Sharp, Smooth };

/// Spectral multiplier with weights w_k = 1{lambda_k <= m} (Sharp) or
/// chi(lambda_k / m) (Smooth). The level m is compared against lambda_k, the
/// square root of the Laplace eigenvalue.
struct MultiplierSpec {
  MultiplierKind kind = MultiplierKind::Sharp;
  double level = std::numeric_limits<double>::infinity();

  static MultiplierSpec sharp(double m) { return {MultiplierKind::Sharp, m}; }
  static MultiplierSpec smooth(double m) { return {MultiplierKind::Smooth, m}; }
  /// Sharp cutoff above every representable mode.
  static MultiplierSpec identity() { return {}; }

  /// Weight for a mode with eigenvalue lambda_sq = lambda_k^2.
  double weight(double lambda_sq) const;
  std::vector<double> weights(const BoxDomain& domain) const;
  bool is_identity_on(const BoxDomain& domain) const;
};

SpectralField apply_multiplier(const MultiplierSpec& spec, const SpectralField& f);

/// max over samples of ||S v||_2 / ||v||_2. Throws std::invalid_argument on a zero sample.
double l2_contraction_defect(const MultiplierSpec& spec, std::span<const SpectralField> samples);

struct CommutationDefect {
  double absolute = 0.0;  ///< max ||-Delta(S v) - S(-Delta v)||_2
  double relative = 0.0;  ///< max of the same divided by ||-Delta v||_2 (0 for v = 0)
};
CommutationDefect commutation_defect(const MultiplierSpec& spec, std::span<const SpectralField> samples);

/// max over samples of ||S v||_{H^s} / (m^s ||v||_2) with the spectral H^s norm
/// sum (1 + lambda_k^2)^s c_k^2. Requires a Smooth spec and nonzero samples.
double regularization_ratio(const MultiplierSpec& spec, double s, std::span<const SpectralField> samples);

/// Exact operator norm of v -> S v / m^s from H^0 to H^s, i.e. the supremum of
/// regularization_ratio over all fields: max_k (1 + lambda_k^2)^{s/2} w_k / m^s.
double regularization_bound(const MultiplierSpec& spec, double s, const BoxDomain& domain);

/// ||S_m v - v||_2 for each level in `levels`, all of the given kind.
std::vector<double> convergence_defect(MultiplierKind kind, std::span<const double> levels,
                                       const SpectralField& v);

/// Seeded standard-normal coefficients on every mode.
SpectralField random_field(DomainPtr domain, std::uint64_t seed);
std::vector<SpectralField> random_fields(DomainPtr domain, int count, std::uint64_t seed);

/// Empirical max ||S v||_p / ||v||_p over `count` seeded random fields, with
/// norms evaluated by padded-grid quadrature.
double lp_operator_ratio(const MultiplierSpec& spec, const DomainPtr& domain, double p, int count,
                         std::uint64_t seed, int padding = 3);

}  // namespace critwave
