#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "critwave/wave_dynamics.hpp"

namespace critwave {

struct ModeAmplitude {
  ModeIndex k;
  double u = 0.0;  ///< coefficient of phi_k in u0
  double v = 0.0;  ///< coefficient of phi_k in u1
};

/// Initial state from an explicit list of orthonormal-basis coefficients.
State modal_state(DomainPtr domain, std::span<const ModeAmplitude> modes);

/// Compactly supported C-infinity bump A exp(1 - 1/(1 - r^2)), r = |x - c| / w,
/// projected onto the basis by padded-grid quadrature. The support must lie
/// inside the box.
SpectralField bump_profile(DomainPtr domain, std::span<const double> center, double width, double amplitude,
                           int quadrature_padding = 4);

/// Seeded band-limited data: modes with every k_i <= band get u_k ~ N(0,1)/lambda_k^2
/// and v_k ~ N(0,1)/lambda_k, all other modes zero.
State random_band_limited(DomainPtr domain, int band, std::uint64_t seed);

/// Scales (u0, u1) by one amplitude a > 0 so that total_energy equals target.
/// E(a) = a^2 Q + a^6 R is increasing in a, so the root is found by bisection.
State rescale_to_energy(const State& s, const ModelConfig& config, double target);

/// Copies coefficients of `s` onto another domain with the same geometry,
/// dropping modes above the target's range and zero-filling new ones.
SpectralField transfer(const SpectralField& f, const DomainPtr& target);
State transfer(const State& s, const DomainPtr& target);

}  // namespace critwave
