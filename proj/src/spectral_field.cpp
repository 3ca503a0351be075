#include "critwave/spectral_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sine_transform.hpp"

namespace critwave {

SpectralField::SpectralField(DomainPtr domain)
    : domain_(std::move(domain)), coeffs_(domain_ ? domain_->size() : 0, 0.0) {
  if (!domain_) throw std::invalid_argument("SpectralField: null domain");
}

SpectralField::SpectralField(DomainPtr domain, std::vector<double> coeffs)
    : domain_(std::move(domain)), coeffs_(std::move(coeffs)) {
  if (!domain_) throw std::invalid_argument("SpectralField: null domain");
  if (coeffs_.size() != domain_->size()) {
    throw std::invalid_argument("SpectralField: expected " + std::to_string(domain_->size()) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

SpectralField SpectralField::mode(DomainPtr domain, const ModeIndex& k, double amplitude) {
  SpectralField f(std::move(domain));
  f.at(k) = amplitude;
  return f;
}

double SpectralField::l2_norm_squared() const {
  double sum = 0.0;
  for (double c : coeffs_) sum += c * c;
  return sum;
}

double SpectralField::l2_norm() const { return std::sqrt(l2_norm_squared()); }

bool SpectralField::is_finite() const {
  for (double c : coeffs_) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

bool SpectralField::same_domain(const SpectralField& other) const {
  return domain_ == other.domain_ || *domain_ == *other.domain_;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (!same_domain(other)) throw std::invalid_argument("SpectralField: domain mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (!same_domain(other)) throw std::invalid_argument("SpectralField: domain mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double inner(const SpectralField& a, const SpectralField& b) {
  if (!a.same_domain(b)) throw std::invalid_argument("inner: domain mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

PhysicalField::PhysicalField(DomainPtr domain, int padding)
    : domain_(std::move(domain)), padding_(padding) {
  if (!domain_) throw std::invalid_argument("PhysicalField: null domain");
  if (padding_ < 1) throw std::invalid_argument("PhysicalField: padding must be >= 1");
  std::size_t total = 1;
  for (int i = 0; i < domain_->dim(); ++i) total *= static_cast<std::size_t>(points_per_axis());
  values_.assign(total, 0.0);
}

PhysicalField::PhysicalField(DomainPtr domain, int padding, std::vector<double> values)
    : PhysicalField(std::move(domain), padding) {
  if (values.size() != values_.size()) {
    throw std::invalid_argument("PhysicalField: resolution mismatch, expected " +
                                std::to_string(values_.size()) + " samples, got " +
                                std::to_string(values.size()));
  }
  values_ = std::move(values);
}

double PhysicalField::cell_volume() const {
  double vol = 1.0;
  for (int i = 0; i < domain_->dim(); ++i) vol *= domain_->length(i) / (points_per_axis() + 1);
  return vol;
}

double PhysicalField::coordinate(int axis, int j) const {
  return j * domain_->length(axis) / (points_per_axis() + 1);
}

namespace {

// Product over axes of sqrt(2/L_i) / 2: maps RODFT00 output to phi_k samples.
double synthesis_scale(const BoxDomain& d) {
  double s = 1.0;
  for (int i = 0; i < d.dim(); ++i) s *= std::sqrt(2.0 / d.length(i)) * 0.5;
  return s;
}

// Visits every (flat spectral index, flat padded-grid index) pair.
template <typename F>
void for_each_embedded(const BoxDomain& d, int points, F&& fn) {
  const auto n = static_cast<std::size_t>(d.modes());
  const auto m = static_cast<std::size_t>(points);
  std::size_t f = 0;
  if (d.dim() == 1) {
    for (std::size_t a = 0; a < n; ++a) fn(f++, a);
  } else if (d.dim() == 2) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) fn(f++, a * m + b);
  } else {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) fn(f++, (a * m + b) * m + c);
  }
}

}  // namespace

PhysicalField to_physical(const SpectralField& f, int padding) {
  const BoxDomain& d = f.domain();
  PhysicalField g(f.domain_ptr(), padding);
  auto values = g.values();
  const int points = g.points_per_axis();
  for_each_embedded(d, points, [&](std::size_t s, std::size_t p) { values[p] = f[s]; });
  detail::dst1_inplace(values, d.dim(), points);
  const double scale = synthesis_scale(d);
  for (double& v : values) v *= scale;
  return g;
}

SpectralField to_spectral(const PhysicalField& g) {
  const BoxDomain& d = g.domain();
  std::vector<double> work(g.values().begin(), g.values().end());
  const int points = g.points_per_axis();
  detail::dst1_inplace(work, d.dim(), points);
  const double scale = synthesis_scale(d) * g.cell_volume();
  SpectralField f(g.domain_ptr());
  for_each_embedded(d, points, [&](std::size_t s, std::size_t p) { f[s] = work[p] * scale; });
  return f;
}

double lp_integral(const PhysicalField& g, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_integral: p must be >= 1");
  double sum = 0.0;
  if (p == 2.0) {
    for (double v : g.values()) sum += v * v;
  } else {
    for (double v : g.values()) sum += std::pow(std::abs(v), p);
  }
  return sum * g.cell_volume();
}

double lp_norm(const PhysicalField& g, double p) { return std::pow(lp_integral(g, p), 1.0 / p); }

double lp_norm(const SpectralField& f, double p, int padding) {
  return lp_norm(to_physical(f, padding), p);
}

SpectralField apply_laplacian(const SpectralField& f) {
  SpectralField out = f;
  const auto lam = f.domain().eigenvalues();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= lam[i];
  return out;
}

double gradient_norm_squared(const SpectralField& f) {
  const auto lam = f.domain().eigenvalues();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += lam[i] * f[i] * f[i];
  return sum;
}

double sobolev_norm_squared(const SpectralField& f, double s) {
  const auto lam = f.domain().eigenvalues();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += std::pow(1.0 + lam[i], s) * f[i] * f[i];
  return sum;
}

}  // namespace critwave
