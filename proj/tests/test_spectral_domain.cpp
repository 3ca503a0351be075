#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "critwave/box_domain.hpp"
#include "critwave/reference.hpp"
#include "critwave/spectral_field.hpp"
#include "critwave/wave_dynamics.hpp"

using namespace critwave;
using std::numbers::pi;

namespace {

SpectralField seeded(const DomainPtr& d, unsigned seed, double decay = 1.0) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  SpectralField f(d);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = n(gen) / (1.0 + decay * d->eigenvalue(k));
  return f;
}

// Pointwise sum_k c_k sqrt(2/L) sin(k pi x / L), evaluated directly.
double eval_1d(const SpectralField& f, double x) {
  const double l = f.domain().length(0);
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * std::sqrt(2.0 / l) * std::sin((k + 1.0) * pi * x / l);
  return s;
}

// Composite Simpson rule with n (even) panels.
template <class F>
double simpson(F&& g, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("eigenvalues follow (k pi / L)^2 summed over axes") {
  const auto d1 = BoxDomain::make(1, 8);
  for (int k = 1; k <= 8; ++k) CHECK(d1->eigenvalue(ModeIndex(k)) == doctest::Approx(k * k));
  const auto d2 = BoxDomain::make(2, std::vector<double>{2.0, 3.0}, 5);
  CHECK(d2->eigenvalue(ModeIndex(2, 3)) == doctest::Approx(std::pow(2 * pi / 2.0, 2) + std::pow(3 * pi / 3.0, 2)));
  CHECK(d2->min_eigenvalue() == doctest::Approx(std::pow(pi / 2, 2) + std::pow(pi / 3, 2)));
  CHECK(d2->max_eigenvalue() == doctest::Approx(std::pow(5 * pi / 2, 2) + std::pow(5 * pi / 3, 2)));
  CHECK_THROWS_AS(d1->eigenvalue(ModeIndex(9)), std::out_of_range);
}

TEST_CASE("flat and multi-index conversions are inverse, last axis fastest") {
  const auto d = BoxDomain::make(3, 4);
  CHECK(d->size() == 64);
  CHECK(d->flat_index(ModeIndex(1, 1, 2)) == 1);
  CHECK(d->flat_index(ModeIndex(2, 1, 1)) == 16);
  for (std::size_t i = 0; i < d->size(); ++i) CHECK(d->flat_index(d->mode_index(i)) == i);
}

TEST_CASE("domain validation") {
  CHECK_THROWS(BoxDomain(0, {pi}, 8));
  CHECK_THROWS(BoxDomain(4, {pi}, 8));
  CHECK_THROWS(BoxDomain(1, {pi}, 3));
  CHECK_THROWS(BoxDomain(1, {-1.0}, 8));
  CHECK_THROWS(BoxDomain(2, {1.0, 2.0, 3.0}, 8));
  CHECK(BoxDomain(2, {1.5}, 8).length(1) == 1.5);
}

TEST_CASE("synthesis matches direct evaluation of the sine series") {
  const auto d = std::make_shared<const BoxDomain>(1, std::vector<double>{2.5}, 16);
  const auto f = seeded(d, 7);
  for (int padding : {1, 3}) {
    const auto g = to_physical(f, padding);
    for (int j = 1; j <= g.points_per_axis(); j += 5) {
      CHECK(g[static_cast<std::size_t>(j - 1)] == doctest::Approx(eval_1d(f, g.coordinate(0, j))).epsilon(1e-12));
    }
  }
}

TEST_CASE("analysis inverts synthesis in 1D, 2D and 3D") {
  for (int dim = 1; dim <= 3; ++dim) {
    const auto d = BoxDomain::make(dim, dim == 3 ? 6 : 12);
    const auto f = seeded(d, 11u + static_cast<unsigned>(dim));
    for (int padding : {1, 2, 3}) {
      const auto back = to_spectral(to_physical(f, padding));
      for (std::size_t k = 0; k < f.size(); ++k) CHECK(back[k] == doctest::Approx(f[k]).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("Parseval: grid quadrature of u^2 equals the coefficient sum") {
  const auto d = BoxDomain::make(2, std::vector<double>{1.0, 2.0}, 10);
  const auto f = seeded(d, 3);
  const auto g = to_physical(f, 2);
  CHECK(lp_integral(g, 2.0) == doctest::Approx(f.l2_norm_squared()).epsilon(1e-13));
}

TEST_CASE("sextic integral of the first mode matches the Wallis value") {
  const auto d = BoxDomain::make(1, 8);
  const auto phi1 = SpectralField::mode(d, ModeIndex(1));
  // phi_1 = sqrt(2/pi) sin x and int_0^pi sin^6 = 5 pi / 16.
  CHECK(sextic_integral(phi1) == doctest::Approx(std::pow(2.0 / pi, 3) * 5.0 * pi / 16.0).epsilon(1e-14));
}

TEST_CASE("lp norms agree with an independent fine Simpson quadrature") {
  const auto d = std::make_shared<const BoxDomain>(1, std::vector<double>{1.7}, 8);
  const auto f = seeded(d, 5, 0.0);
  for (double p : {4.0, 6.0, 10.0, 12.0}) {
    const double oracle = std::pow(simpson([&](double x) { return std::pow(std::abs(eval_1d(f, x)), p); }, 0.0, 1.7, 20000), 1.0 / p);
    CHECK(lp_norm(f, p, 8) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("quintic projection of the first mode matches the sin^5 identity") {
  const auto d = BoxDomain::make(1, 8);
  const auto q = quintic_term(SpectralField::mode(d, ModeIndex(1)), MultiplierSpec::identity());
  // sin^5 = (10 sin x - 5 sin 3x + sin 5x) / 16, so <phi_1^5, phi_j> = (2/pi)^3 (pi/2) c_j.
  const double scale = std::pow(2.0 / pi, 3) * pi / 2.0;
  const double expected[8] = {10.0 / 16, 0, -5.0 / 16, 0, 1.0 / 16, 0, 0, 0};
  for (std::size_t j = 0; j < 8; ++j) CHECK(q[j] == doctest::Approx(scale * expected[j]).scale(1.0).epsilon(1e-14));
}

TEST_CASE("dealiased quintic matches the exact trigonometric expansion") {
  const auto d = std::make_shared<const BoxDomain>(1, std::vector<double>{2.0}, 12);
  const auto u = seeded(d, 9, 0.2);
  const auto fast = quintic_term(u, MultiplierSpec::identity(), 3);
  const auto exact = exact_quintic_1d(u);
  for (std::size_t j = 0; j < u.size(); ++j) CHECK(fast[j] == doctest::Approx(exact[j]).scale(1.0).epsilon(1e-12));
  // Without padding the projection aliases.
  const auto aliased = quintic_term(u, MultiplierSpec::identity(), 1);
  double diff = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) diff = std::max(diff, std::abs(aliased[j] - exact[j]));
  CHECK(diff > 1e-6);
}

TEST_CASE("gradient and Sobolev norms are weighted coefficient sums") {
  const auto d = BoxDomain::make(2, 6);
  const auto f = seeded(d, 1);
  double grad = 0.0, h1 = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    grad += d->eigenvalue(k) * f[k] * f[k];
    h1 += (1.0 + d->eigenvalue(k)) * f[k] * f[k];
  }
  CHECK(gradient_norm_squared(f) == doctest::Approx(grad));
  CHECK(sobolev_norm_squared(f, 1.0) == doctest::Approx(h1));
  CHECK(inner(f, apply_laplacian(f)) == doctest::Approx(grad));
}

TEST_CASE("field arithmetic rejects mismatched domains") {
  const auto a = SpectralField(BoxDomain::make(1, 8));
  const auto b = SpectralField(BoxDomain::make(1, 16));
  CHECK_THROWS(a + b);
  CHECK_THROWS(inner(a, b));
  CHECK_THROWS(PhysicalField(BoxDomain::make(1, 8), 2, std::vector<double>(10)));
}
