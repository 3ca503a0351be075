#pragma once

#include <span>

namespace critwave::detail {

/// In-place unnormalized DST-I (FFTW RODFT00) over a d-dimensional cube of
/// `points` samples per axis:
///   Y_k = 2^d sum_j X_j prod_i sin(pi (j_i+1)(k_i+1) / (points+1)).
/// Plans are created once per (dim, points) under a mutex and shared; the
/// execution itself is reentrant.
void dst1_inplace(std::span<double> data, int dim, int points);

}  // namespace critwave::detail
