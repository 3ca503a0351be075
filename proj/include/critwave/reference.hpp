#pragma once

#include <span>
#include <vector>

#include "critwave/wave_dynamics.hpp"

namespace critwave {

/// <u^5, phi_j> for j = 1..N on a 1D box, computed by expanding the fifth
/// power of the sine series as an exact trigonometric product (complex
/// exponential convolution). Independent of the transform path.
SpectralField exact_quintic_1d(const SpectralField& u);

struct ReferenceOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
};

/// Dense high-accuracy solution of the 2N-dimensional mode system
///   u_k' = v_k,  v_k' = -lambda_k^2 u_k - w_k q_k(u) - gamma(u, v) v_k
/// on a 1D box, with q from exact_quintic_1d, by an adaptive Runge-Kutta-Fehlberg
/// 7(8) integrator. Returns the state at each requested time (ascending,
/// starting at or after initial.t).
std::vector<State> reference_trajectory(const State& initial, const ModelConfig& config,
                                        std::span<const double> times, const ReferenceOptions& options = {});

/// max over paired states of the largest |coefficient| difference in u and v.
double sup_deviation(std::span<const State> a, std::span<const State> b);

}  // namespace critwave
