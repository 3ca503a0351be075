#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "critwave/box_domain.hpp"

namespace critwave {

/// Real coefficients c_k of f = sum_k c_k phi_k over the N^d modes of a box.
/// With the orthonormal basis, ||f||_2^2 = sum_k c_k^2 exactly.
class SpectralField {
 public:
  explicit SpectralField(DomainPtr domain);
  SpectralField(DomainPtr domain, std::vector<double> coeffs);

  static SpectralField mode(DomainPtr domain, const ModeIndex& k, double amplitude = 1.0);

  const BoxDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }

  std::size_t size() const { return coeffs_.size(); }
  std::span<double> coeffs() { return coeffs_; }
  std::span<const double> coeffs() const { return coeffs_; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& at(const ModeIndex& k) { return coeffs_[domain_->flat_index(k)]; }
  double at(const ModeIndex& k) const { return coeffs_[domain_->flat_index(k)]; }

  /// sum_k c_k^2, accumulated sequentially over the flat mode index.
  double l2_norm_squared() const;
  double l2_norm() const;
  bool is_finite() const;
  bool same_domain(const SpectralField& other) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  DomainPtr domain_;
  std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// L^2 inner product via Parseval. Throws std::invalid_argument on domain mismatch.
double inner(const SpectralField& a, const SpectralField& b);

/// Samples on the interior tensor grid x_j = j L / (M + 1), j = 1..M, with
/// M = padding * N points per axis. Boundary values are never stored; they
/// vanish for every sine series.
class PhysicalField {
 public:
  PhysicalField(DomainPtr domain, int padding);
  PhysicalField(DomainPtr domain, int padding, std::vector<double> values);

  const BoxDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  int padding() const { return padding_; }
  int points_per_axis() const { return padding_ * domain_->modes(); }
  /// Quadrature weight of every grid point: prod_i L_i / (M + 1).
  double cell_volume() const;
  /// Coordinate of 1-based grid index j along an axis.
  double coordinate(int axis, int j) const;

  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  DomainPtr domain_;
  int padding_;
  std::vector<double> values_;
};

/// Evaluates sum_k c_k phi_k on the padded interior grid. Exact for any
/// padding >= 1 since f is band-limited to N modes per axis.
PhysicalField to_physical(const SpectralField& f, int padding = 1);

/// Discrete L^2 projection onto the first N modes per axis. Exact for sine
/// polynomials of degree < 2(M+1) - N per axis, which covers the fifth power
/// of a band-limited field once padding >= 3.
SpectralField to_spectral(const PhysicalField& g);

/// integral |g|^p using the interior grid rule sum_j |g_j|^p * cell_volume.
/// For sine polynomials and even integer p this is exact whenever p*N < 2(M+1);
/// otherwise it is a quadrature approximation controlled by the padding.
double lp_integral(const PhysicalField& g, double p);
double lp_norm(const PhysicalField& g, double p);
double lp_norm(const SpectralField& f, double p, int padding = 3);

/// Coefficientwise multiplication by lambda_k^2, i.e. the positive operator -Delta.
SpectralField apply_laplacian(const SpectralField& f);

/// sum_k lambda_k^2 c_k^2 = ||grad f||_2^2.
double gradient_norm_squared(const SpectralField& f);

/// sum_k (1 + lambda_k^2)^s c_k^2.
double sobolev_norm_squared(const SpectralField& f, double s);

}  // namespace critwave
