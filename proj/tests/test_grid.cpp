#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "lpweak/families.hpp"
#include "lpweak/grid.hpp"

using namespace lpweak;

TEST_CASE("make_grid derives spacing and validates input") {
  Grid g1 = make_grid(1, 16.0, 1024);
  CHECK(g1.spacing == 0.015625);
  Grid g2 = make_grid(2, 8.0, 256);
  CHECK(g2.spacing == 0.03125);
  CHECK(g2.cell_count() == 256u * 256u);
  CHECK_THROWS_AS(make_grid(3, 8.0, 256), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8.0, 100), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, -1.0, 256), std::invalid_argument);
}

TEST_CASE("forward transform of constants and pure modes") {
  Grid g = make_grid(1, 16.0, 256);
  GridFunction one(g);
  for (auto& v : one.values) v = 1.0;
  GridFunction oh = forward_transform(one);
  CHECK(std::abs(oh[0] - cplx{16.0, 0.0}) < 1e-12);  // DC carries the full mass L
  for (std::size_t i = 1; i < oh.size(); ++i) CHECK(std::abs(oh[i]) < 1e-12);

  const long k0 = 5;
  GridFunction wave(g);
  for (std::size_t i = 0; i < wave.size(); ++i) {
    const double ph = 2.0 * M_PI * k0 * g.coord(i) / g.length;
    wave[i] = cplx{std::cos(ph), std::sin(ph)};
  }
  GridFunction wh = forward_transform(wave);
  for (std::size_t i = 0; i < wh.size(); ++i) {
    if (g.mode(i) == k0)
      CHECK(std::abs(wh[i] - cplx{16.0, 0.0}) < 1e-10);
    else
      CHECK(std::abs(wh[i]) < 1e-10);
  }
}

TEST_CASE("transform round trip and tag discipline") {
  for (int dim : {1, 2}) {
    Grid g = make_grid(dim, dim == 1 ? 16.0 : 8.0, dim == 1 ? 512 : 64);
    GridFunction f(g);
    Rng rng(42, dim);
    for (auto& v : f.values) v = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    GridFunction rt = inverse_transform(forward_transform(f));
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(f[i] - rt[i]));
      scale = std::max(scale, std::abs(f[i]));
    }
    CHECK(err <= 1e-12 * scale);
  }
  Grid g = make_grid(1, 16.0, 256);
  GridFunction f(g, Tag::spectral);
  CHECK_THROWS_AS(forward_transform(f), std::invalid_argument);
  GridFunction h(g, Tag::physical);
  CHECK_THROWS_AS(inverse_transform(h), std::invalid_argument);
}

TEST_CASE("parseval identity") {
  Grid g = make_grid(1, 16.0, 1024);
  GridFunction f = random_band_limited(g, 9, 0, false);
  const double phys = l2_norm_physical(f);
  const double spec = l2_norm_spectral(forward_transform(f));
  CHECK(std::abs(phys - spec) <= 1e-10 * phys);
}

TEST_CASE("convolution: identity element, triangle, averaging") {
  Grid g = make_grid(1, 32.0, 2048);
  GridFunction f = random_band_limited(g, 11, 3, false);
  GridFunction delta = embed_point_mass(g, {0.0}, 1.0);
  GridFunction fd = convolve(f, delta);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(fd[i] - f[i]) < 1e-11);

  GridFunction chi(g);
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const double x = g.coord(i);
    if (x >= 0.0 && x < 1.0) chi[i] = 1.0;
  }
  GridFunction tri = convolve(chi, chi);
  // direct-sum oracle at a few points (the kernel origin x = 0 is cell S/2)
  for (double x : {0.5, 1.0, 1.5}) {
    double direct = 0.0;
    const std::size_t ix = g.snap({x});
    for (std::size_t j = 0; j < chi.size(); ++j) {
      const std::size_t k = (g.samples / 2 + ix + chi.size() - j) % chi.size();
      direct += chi[j].real() * chi[k].real();
    }
    direct *= g.spacing;
    CHECK(std::abs(tri[ix].real() - direct) < 1e-10);
  }
  const std::size_t peak = g.snap({1.0});
  CHECK(std::abs(tri[peak].real() - 1.0) <= 2.0 * g.spacing);

  // nonnegative unit-mass kernel averages: min f <= conv <= max f
  GridFunction kern(g);
  for (std::size_t i = 0; i < kern.size(); ++i) {
    const double x = g.coord(i);
    kern[i] = std::exp(-4.0 * x * x);
  }
  const double mass = kern.integral().real();
  for (auto& v : kern.values) v /= mass;
  GridFunction avg = convolve(f, kern);
  double fmin = 1e300, fmax = -1e300;
  for (auto& v : f.values) {
    fmin = std::min(fmin, v.real());
    fmax = std::max(fmax, v.real());
  }
  for (auto& v : avg.values) {
    CHECK(v.real() >= fmin - 1e-10);
    CHECK(v.real() <= fmax + 1e-10);
  }
}

TEST_CASE("convolution is commutative and bilinear") {
  Grid g = make_grid(1, 16.0, 512);
  GridFunction f = random_band_limited(g, 5, 1, false);
  GridFunction h = random_band_limited(g, 5, 2, false);
  GridFunction fh = convolve(f, h);
  GridFunction hf = convolve(h, f);
  for (std::size_t i = 0; i < fh.size(); ++i) CHECK(std::abs(fh[i] - hf[i]) < 1e-12);

  GridFunction sum(g);
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = f[i] + 2.0 * h[i];
  GridFunction k = random_band_limited(g, 5, 3, false);
  GridFunction lhs = convolve(sum, k);
  GridFunction t1 = convolve(f, k), t2 = convolve(h, k);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    CHECK(std::abs(lhs[i] - (t1[i] + 2.0 * t2[i])) < 1e-12);

  Grid g2 = make_grid(1, 16.0, 256);
  GridFunction other(g2);
  CHECK_THROWS_AS(convolve(f, other), std::invalid_argument);
}

TEST_CASE("dilate: identity, gaussian closed form, integrals, composition") {
  Grid g = make_grid(1, 32.0, 4096);
  GridFunction gauss(g);
  for (std::size_t i = 0; i < gauss.size(); ++i) {
    const double x = g.coord(i);
    gauss[i] = std::exp(-M_PI * x * x);
  }
  GridFunction same = dilate(gauss, 1.0);
  for (std::size_t i = 0; i < same.size(); ++i) CHECK(std::abs(same[i] - gauss[i]) < 1e-10);

  GridFunction d2 = dilate(gauss, 2.0);
  for (std::size_t i = 0; i < d2.size(); ++i) {
    const double x = g.coord(i);
    CHECK(std::abs(d2[i] - 0.5 * std::exp(-M_PI * x * x / 4.0)) < 1e-8);
  }

  const double mass0 = gauss.integral().real();
  for (double t : {0.25, 0.5, 2.0, 4.0}) {
    CHECK(std::abs(dilate(gauss, t).integral().real() - mass0) < 1e-8);
  }

  GridFunction a = dilate(dilate(gauss, 0.5), 4.0);
  GridFunction b = dilate(gauss, 2.0);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8);

  // full-band kernel cannot be compressed
  GridFunction spike = embed_point_mass(g, {0.0}, 1.0);
  CHECK_THROWS_AS(dilate(spike, 0.25), std::domain_error);
}

TEST_CASE("point masses: snapping, cancellation, shift") {
  Grid g = make_grid(1, 16.0, 1024);
  GridFunction d0 = embed_point_mass(g, {0.0}, 1.0);
  const std::size_t center = g.samples / 2;
  CHECK(d0[center].real() == 1.0 / g.spacing);
  for (std::size_t i = 0; i < d0.size(); ++i)
    if (i != center) CHECK(d0[i] == cplx{0.0, 0.0});
  CHECK(d0.integral().real() == doctest::Approx(1.0));

  GridFunction dip = dipole(g);
  CHECK(std::abs(dip.integral()) < 1e-12);

  GridFunction kern(g);
  for (std::size_t i = 0; i < kern.size(); ++i) {
    const double x = g.coord(i);
    kern[i] = std::exp(-M_PI * x * x);
  }
  GridFunction shifted = convolve(embed_point_mass(g, {1.0}, 1.0), kern);
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    const double x = g.coord(i);
    // the mass sits exactly on a grid point, so the shift is exact up to wrap
    double d = x - 1.0;
    if (d < -0.5 * g.length) d += g.length;
    const double ref = std::exp(-M_PI * d * d);
    if (std::abs(x - 1.0) < 4.0) CHECK(std::abs(shifted[i].real() - ref) < 1e-9);
  }

  CHECK_THROWS_AS(embed_point_mass(g, {9.0}, 1.0), std::domain_error);
}

TEST_CASE("binary serialization round trip") {
  Grid g = make_grid(2, 8.0, 32);
  GridFunction f(g, Tag::spectral);
  Rng rng(1, 2);
  for (auto& v : f.values) v = cplx{rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const auto path = std::filesystem::temp_directory_path() / "lpweak_gf_test.bin";
  save_grid_function(f, path.string());
  GridFunction back = load_grid_function(path.string());
  CHECK(back.grid == f.grid);
  CHECK(back.tag == f.tag);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
  std::filesystem::remove(path);
}
