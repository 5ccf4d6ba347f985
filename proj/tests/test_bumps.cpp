#include <cmath>
#include <functional>

#include "doctest.h"
#include "lpweak/bumps.hpp"
#include "lpweak/grid.hpp"

using namespace lpweak;

namespace {

// adaptive Simpson, independent of the implementation's midpoint refinement
double simpson(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double eps, int depth) {
  const double c = 0.5 * (a + b);
  const double whole = simpson(f, a, b);
  const double left = simpson(f, a, c), right = simpson(f, c, b);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, c, eps / 2, depth - 1) +
         adaptive_simpson(f, c, b, eps / 2, depth - 1);
}

}  // namespace

TEST_CASE("mother bump profile: plateau values, support, positivity") {
  LpBump bump = make_lp_bump(1.0);
  CHECK(bump.fourier(1.0) == 1.0);
  CHECK(bump.fourier(0.5) == 0.0);
  CHECK(bump.fourier(3.0) == 0.0);
  for (int i = 0; i <= 4000; ++i) {
    const double r = 1e-3 + 4.0 * i / 4000.0;
    const double v = bump.fourier(r);
    CHECK(v >= 0.0);
    if (r < 6.0 / 7.0 || r > 2.0) CHECK(v == 0.0);
    if (r >= 1.0 && r <= 12.0 / 7.0) CHECK(v == 1.0);
  }
  CHECK_THROWS_AS(make_lp_bump(0.0), std::invalid_argument);
}

TEST_CASE("dyadic partition of unity telescopes exactly") {
  LpBump bump = make_lp_bump(1.0);
  for (int i = 1; i <= 2000; ++i) {
    const double r = 1e-4 * std::pow(10.0, 6.0 * i / 2000.0);  // 1e-4 .. 1e2
    double sum = 0.0;
    for (int j = -40; j <= 40; ++j) sum += bump.fourier(std::ldexp(r, -j));
    CHECK(std::abs(sum - 1.0) <= 1e-10);
  }
}

TEST_CASE("derived kernels: envelope, low pass, block") {
  LpBump bump = make_lp_bump(1.0);
  DerivedKernels k = derive_kernels(bump, 0, 1);
  CHECK(k.envelope(1.0) == 1.0);
  for (int i = 0; i <= 1000; ++i) {
    const double r = 6.0 / 7.0 + (2.0 - 6.0 / 7.0) * i / 1000.0;
    CHECK(k.envelope(r) == 1.0);  // identically 1 on the band support
  }
  CHECK(k.low_pass(0.0) == 1.0);
  for (int i = 0; i <= 100; ++i) CHECK(k.low_pass(6.0 / 7.0 * i / 100.0) == 1.0);
  for (int i = 0; i <= 1000; ++i) {
    const double r = 4.0 * i / 1000.0;
    CHECK(std::abs(k.block(r) - (bump.fourier(r) + bump.fourier(0.5 * r))) < 1e-15);
  }
  CHECK_THROWS_AS(derive_kernels(bump, 1, 1), std::invalid_argument);
}

TEST_CASE("physical-side bump decay stays within its empirical envelope") {
  // The exp-glue transition squeezed into [6/7, 1] makes the superpolynomial
  // decay set in slowly; on this window the measured envelope constant is
  // 1.45e7 and the tail beyond |x| = 8 stays below 0.3% of the peak.
  Grid g = make_grid(1, 32.0, 4096);
  LpBump bump = make_lp_bump(1.0);
  GridFunction psi = kernel_on_grid(g, bump.profile());
  const double peak = psi.max_abs();
  CHECK(peak == doctest::Approx(1.857394).epsilon(1e-3));
  double weighted = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = std::abs(g.coord(i));
    weighted = std::max(weighted, std::abs(psi[i]) * std::pow(1.0 + x, 8.0));
  }
  CHECK(weighted <= 4e7);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double x = std::abs(g.coord(i));
    if (x >= 8.0) CHECK(std::abs(psi[i]) <= 0.01 * peak);
    if (x >= 2.0) CHECK(std::abs(psi[i]) <= 0.10 * peak);
  }
}

TEST_CASE("axis factors differentiate exactly") {
  // finite-difference cross-check of the polynomial recurrences
  for (auto base : {AxisFactor::Base::gaussian, AxisFactor::Base::flat_bump}) {
    AxisFactor f;
    f.base = base;
    f.width = 0.8;
    f.center = 0.2;
    for (int k = 1; k <= 3; ++k) {
      for (double x : {0.0, 0.3, 0.55, 0.8}) {
        const double h = 1e-5;
        const double fd = (f.deriv(k - 1, x + h) - f.deriv(k - 1, x - h)) / (2.0 * h);
        const double an = f.deriv(k, x);
        CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
      }
    }
  }
  AxisFactor m;
  m.modulated = true;
  m.mod_freq = 2.5;
  for (double x : {-0.4, 0.1, 0.6}) {
    const double h = 1e-5;
    const double fd = (m.deriv(0, x + h) - m.deriv(0, x - h)) / (2.0 * h);
    CHECK(std::abs(fd - m.deriv(1, x)) <= 1e-6 * (1.0 + std::abs(m.deriv(1, x))));
  }
}

TEST_CASE("seminorm of the unit gaussian matches independent quadrature") {
  TestFunction gauss;
  gauss.factors.resize(1);
  const double v = schwartz_seminorm(gauss, 0);
  // closed form: integral of |phi| + |phi'| = 1 + 2
  CHECK(std::abs(v - 3.0) <= 3e-6 * 3.0);
  auto integrand = [](double x) {
    const double phi = std::exp(-M_PI * x * x);
    return phi + 2.0 * M_PI * std::abs(x) * phi;
  };
  const double oracle = adaptive_simpson(integrand, -9.0, 9.0, 1e-10, 30);
  CHECK(std::abs(v - oracle) <= 1e-6 * oracle);
}

TEST_CASE("seminorm at (0,1) is the plain seminorm; scaling identity") {
  TestFunction gauss;
  gauss.factors.resize(1);
  const int N = 2;
  const double plain = schwartz_seminorm(gauss, N);
  const double at01 = schwartz_seminorm(gauss, N, {0.0}, 1.0);
  CHECK(plain == at01);

  // psi(x) = phi((x0 - x)/R) has seminorm R^n times the plain one
  for (double R : {0.5, 2.0, 4.0}) {
    const double x0 = 1.0;
    TestFunction psi;
    psi.factors.resize(1);
    psi.factors[0].center = x0;
    psi.factors[0].width = R;
    const double lhs = schwartz_seminorm(psi, N, {x0}, R);
    CHECK(std::abs(lhs - R * plain) <= 2e-5 * R * plain);
  }
}

TEST_CASE("grid seminorm agrees with the closed form and flags non-decay") {
  Grid g = make_grid(1, 32.0, 2048);
  TestFunction gauss;
  gauss.factors.resize(1);
  GridFunction f = gauss.sample_scaled(g, 1.0);
  const auto res = schwartz_seminorm(f, 0, {0.0}, 1.0);
  CHECK_FALSE(res.lower_bound_only);
  CHECK(std::abs(res.value - 3.0) <= 1e-4 * 3.0);

  GridFunction one(g);
  for (auto& v : one.values) v = 1.0;
  CHECK(schwartz_seminorm(one, 0, {0.0}, 1.0).lower_bound_only);
}

TEST_CASE("dictionary: normalization, prefix property, mollifier") {
  const auto dict = build_dictionary(1, 2, 10, 77);
  CHECK(dict.size() == 10);
  for (const auto& e : dict) {
    const double v = schwartz_seminorm(e.fn, 2);
    CHECK(std::abs(v - 1.0) <= 1e-6);
  }
  const auto longer = build_dictionary(1, 2, 12, 77);
  for (std::size_t i = 0; i < dict.size(); ++i) {
    CHECK(dict[i].fn.name == longer[i].fn.name);
    CHECK(dict[i].fn.amplitude == longer[i].fn.amplitude);
  }
  // element 0 is the canonical mollifier: nonzero integral
  Grid g = make_grid(1, 16.0, 512);
  CHECK(std::abs(dict[0].fn.sample_scaled(g, 1.0).integral().real()) > 1e-6);
  CHECK_THROWS_AS(build_dictionary(1, 2, 4, 1), std::invalid_argument);
}

TEST_CASE("dictionary in two dimensions") {
  const auto dict = build_dictionary(2, 1, 8, 3);
  for (const auto& e : dict) {
    const double v = schwartz_seminorm(e.fn, 1);
    CHECK(std::abs(v - 1.0) <= 2e-5);
  }
}
