#include <cmath>

#include "doctest.h"
#include "lpweak/families.hpp"
#include "lpweak/maximal.hpp"

using namespace lpweak;

namespace {

RadialProfile gaussian_profile() {
  return [](double r) { return std::exp(-M_PI * r * r); };
}

RadialProfile low_pass_profile() {
  return derive_kernels(make_lp_bump(1.0), 0, 1).low_pass_profile();
}

}  // namespace

TEST_CASE("scale sets are geometric, anchored at 1, clipped to [4h, L/4]") {
  Grid g = make_grid(1, 16.0, 1024);
  ScaleSet sc = ScaleSet::geometric(g, 4);
  REQUIRE_FALSE(sc.empty());
  CHECK(sc.scales.front() >= 4.0 * g.spacing * (1.0 - 1e-12));
  CHECK(sc.scales.back() <= g.length / 4.0 * (1.0 + 1e-12));
  bool has_unit = false;
  for (double t : sc.scales)
    if (std::abs(t - 1.0) < 1e-12) has_unit = true;
  CHECK(has_unit);
  for (std::size_t i = 1; i < sc.scales.size(); ++i)
    CHECK(sc.scales[i] / sc.scales[i - 1] == doctest::Approx(std::exp2(0.25)));
  // too-coarse grids leave no admissible scale
  CHECK(ScaleSet::geometric(make_grid(1, 16.0, 8), 4).empty());
}

TEST_CASE("hardy-littlewood maximal: constants, domination, closed form") {
  Grid g = make_grid(1, 16.0, 4096);
  GridFunction c(g);
  for (auto& v : c.values) v = cplx{-2.0, 0.0};
  GridFunction mc = hardy_littlewood_maximal(c);
  for (auto& v : mc.values) CHECK(std::abs(v.real() - 2.0) < 1e-12);

  GridFunction f = random_band_limited(g, 10, 0, false);
  GridFunction mf = hardy_littlewood_maximal(f);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(mf[i].real() >= std::abs(f[i]) - 1e-14);

  GridFunction chi(g);
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const double x = g.coord(i);
    if (x >= 0.0 && x < 1.0) chi[i] = 1.0;
  }
  GridFunction m = hardy_littlewood_maximal(chi);
  for (double x : {1.5, 2.0, 3.0, 4.0}) {
    const std::size_t i = g.snap({x});
    CHECK(std::abs(m[i].real() - 1.0 / (2.0 * x)) <= 3.0 * g.spacing / (x * x));
  }
}

TEST_CASE("hardy-littlewood maximal in two dimensions") {
  Grid g = make_grid(2, 8.0, 64);
  GridFunction f = random_band_limited(g, 3, 1, false);
  GridFunction m = hardy_littlewood_maximal(f);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(m[i].real() >= std::abs(f[i]) - 1e-12);
  GridFunction c(g);
  for (auto& v : c.values) v = 1.5;
  GridFunction mc = hardy_littlewood_maximal(c);
  for (auto& v : mc.values) CHECK(std::abs(v.real() - 1.5) < 1e-10);
}

TEST_CASE("smooth maximal: averaging bound and vector structure") {
  Grid g = make_grid(1, 16.0, 1024);
  ScaleSet sc = ScaleSet::geometric(g, 4);
  GridFunction f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.coord(i);
    f[i] = 1.0 + 0.5 * std::cos(2.0 * M_PI * x / g.length);  // positive, smooth
  }
  VectorGridFunction F(std::vector<GridFunction>{f});
  GridFunction m = smooth_maximal(F, gaussian_profile(), sc);
  double sup = 0.0;
  for (auto& v : f.values) sup = std::max(sup, v.real());
  for (auto& v : m.values) CHECK(v.real() <= sup + 1e-10);

  VectorGridFunction FF(std::vector<GridFunction>{f, f});
  GridFunction m2 = smooth_maximal(FF, gaussian_profile(), sc);
  for (std::size_t i = 0; i < m.size(); ++i)
    CHECK(m2[i].real() == doctest::Approx(std::sqrt(2.0) * m[i].real()));

  CHECK_THROWS_AS(smooth_maximal(F, gaussian_profile(), ScaleSet{}), std::invalid_argument);
}

TEST_CASE("nontangential maximal: degenerate aperture, monotonicity, enumeration") {
  Grid g = make_grid(1, 16.0, 1024);
  ScaleSet sc = ScaleSet::geometric(g, 4);
  VectorGridFunction F(std::vector<GridFunction>{random_band_limited(g, 6, 2, false)});
  const auto prof = low_pass_profile();

  // aperture below one cell per max scale degenerates to the smooth maximal
  const double tiny = 0.9 * g.spacing / sc.scales.back();
  GridFunction m0 = smooth_maximal(F, prof, sc);
  GridFunction mt = nontangential_maximal(F, prof, tiny, sc);
  for (std::size_t i = 0; i < m0.size(); ++i) CHECK(mt[i].real() == m0[i].real());

  GridFunction mh = nontangential_maximal(F, prof, 0.5, sc);
  GridFunction m1 = nontangential_maximal(F, prof, 1.0, sc);
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m1[i].real() >= mh[i].real());

  CHECK_THROWS_AS(nontangential_maximal(F, prof, -1.0, sc), std::invalid_argument);

  // direct enumeration oracle at a single scale, spike input
  ScaleSet one;
  one.scales = {1.0};
  VectorGridFunction D(std::vector<GridFunction>{dipole(g)});
  GridFunction cone = nontangential_maximal(D, prof, 1.0, one);
  GridFunction base = smooth_maximal(D, prof, one);
  const long rad = static_cast<long>(std::floor(1.0 / g.spacing));
  for (std::size_t i = 0; i < cone.size(); i += 37) {
    double best = 0.0;
    for (long d = -rad; d <= rad; ++d) {
      const std::size_t j =
          static_cast<std::size_t>((static_cast<long>(i) + d + static_cast<long>(g.samples)) %
                                   static_cast<long>(g.samples));
      best = std::max(best, base[j].real());
    }
    CHECK(cone[i].real() == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("peetre maximal: monotone in b, translation equivariant") {
  Grid g = make_grid(1, 16.0, 512);
  ScaleSet sc = ScaleSet::geometric(g, 2);
  VectorGridFunction F(std::vector<GridFunction>{random_band_limited(g, 14, 3, false)});
  const auto prof = low_pass_profile();
  GridFunction p1 = peetre_maximal(F, prof, 1.0, sc);
  GridFunction p2 = peetre_maximal(F, prof, 2.0, sc);
  for (std::size_t i = 0; i < p1.size(); ++i)
    CHECK(p2[i].real() <= p1[i].real() + 1e-14);
  CHECK_THROWS_AS(peetre_maximal(F, prof, 0.0, sc), std::invalid_argument);

  // circular shift commutes with the maximal function
  const std::size_t shift = 77;
  GridFunction shifted(g);
  for (std::size_t i = 0; i < shifted.size(); ++i)
    shifted[i] = F.components[0][(i + shift) % g.samples];
  GridFunction ps = peetre_maximal(VectorGridFunction(std::vector<GridFunction>{shifted}),
                                   prof, 2.0, sc);
  for (std::size_t i = 0; i < ps.size(); ++i)
    CHECK(ps[i].real() == doctest::Approx(p2[(i + shift) % g.samples].real()).epsilon(1e-12));
}

TEST_CASE("maximal chain holds pointwise including on spikes") {
  Grid g = make_grid(1, 16.0, 512);
  ScaleSet sc = ScaleSet::geometric(g, 4);
  const auto prof = low_pass_profile();
  const double b = 2.0;
  for (int variant = 0; variant < 2; ++variant) {
    VectorGridFunction F =
        variant == 0
            ? VectorGridFunction(std::vector<GridFunction>{dipole(g)})
            : random_band_limited_vector(g, 15, 1, 2, false);
    GridFunction m = smooth_maximal(F, prof, sc);
    GridFunction mp = peetre_maximal(F, prof, b, sc);
    for (double a : {0.5, 1.0, 2.0}) {
      GridFunction mc = nontangential_maximal(F, prof, a, sc);
      const double factor = std::pow(1.0 + a, b);
      for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(m[i].real() <= mc[i].real());
        CHECK(mc[i].real() <= factor * mp[i].real() * (1.0 + 1e-13));
      }
    }
  }
}

TEST_CASE("maximal chain in two dimensions") {
  Grid g = make_grid(2, 8.0, 64);
  ScaleSet sc = ScaleSet::geometric(g, 2);
  const auto prof = low_pass_profile();
  VectorGridFunction F = random_band_limited_vector(g, 21, 0, 2, false);
  GridFunction m = smooth_maximal(F, prof, sc);
  GridFunction mp = peetre_maximal(F, prof, 3.0, sc);
  GridFunction mc = nontangential_maximal(F, prof, 1.0, sc);
  const double factor = std::pow(2.0, 3.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(m[i].real() <= mc[i].real());
    CHECK(mc[i].real() <= factor * mp[i].real() * (1.0 + 1e-13));
  }
}

TEST_CASE("grand maximal dominates each dictionary kernel and grows with size") {
  Grid g = make_grid(1, 16.0, 512);
  ScaleSet sc = ScaleSet::geometric(g, 2);
  const auto dict8 = build_dictionary(1, 2, 8, 7);
  const auto dict10 = build_dictionary(1, 2, 10, 7);
  VectorGridFunction F = random_band_limited_vector(g, 33, 2, 2, false);

  GridFunction g8 = grand_maximal(F, dict8, sc);
  GridFunction g10 = grand_maximal(F, dict10, sc);
  for (std::size_t i = 0; i < g8.size(); ++i) {
    CHECK(g10[i].real() >= g8[i].real() - 1e-14);
  }
  for (const auto& e : dict8) {
    GridFunction single = nontangential_with_kernel(F, e.fn, sc, 1.0);
    for (std::size_t i = 0; i < single.size(); ++i)
      CHECK(g8[i].real() >= single[i].real() - 1e-14);
  }

  // an unnormalized kernel joins after dividing by its own seminorm
  TestFunction extra;
  extra.factors.resize(1);
  extra.factors[0].width = 0.37;
  extra.amplitude = 5.0;
  const double sem = schwartz_seminorm(extra, 2);
  std::vector<DictionaryEntry> augmented = dict8;
  DictionaryEntry e;
  e.fn = extra;
  e.fn.amplitude /= sem;
  e.raw_seminorm = sem;
  augmented.push_back(e);
  GridFunction ga = grand_maximal(F, augmented, sc);
  GridFunction raw = nontangential_with_kernel(F, extra, sc, 1.0);
  for (std::size_t i = 0; i < ga.size(); ++i)
    CHECK(ga[i].real() >= raw[i].real() / sem - 1e-12);

  VectorGridFunction zero(std::vector<GridFunction>{GridFunction(g)});
  CHECK(grand_maximal(zero, dict8, sc).max_abs() == 0.0);
}

TEST_CASE("pairing bound: coefficients against the grand maximal floor") {
  Grid g = make_grid(1, 16.0, 512);
  ScaleSet sc = ScaleSet::geometric(g, 4);
  const int N = 2;
  const auto dict = build_dictionary(1, N, 8, 19);
  VectorGridFunction F = random_band_limited_vector(g, 44, 3, 3, false);
  GridFunction grand = grand_maximal(F, dict, sc);

  double floor = 1e300;
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (std::abs(g.coord(i)) <= 1.0) floor = std::min(floor, grand[i].real());

  for (const auto& e : dict) {
    GridFunction phi = e.fn.sample_scaled(g, 1.0);
    double sq = 0.0;
    for (const auto& comp : F.components) {
      cplx pair{0.0, 0.0};
      for (std::size_t i = 0; i < comp.size(); ++i) pair += comp[i] * phi[i];
      pair *= g.cell_measure();
      sq += std::norm(pair);
    }
    CHECK(std::sqrt(sq) <= floor * (1.0 + 1e-9));
  }
}

TEST_CASE("vector monotonicity: appending a component never decreases maxima") {
  Grid g = make_grid(1, 16.0, 512);
  ScaleSet sc = ScaleSet::geometric(g, 2);
  const auto prof = low_pass_profile();
  VectorGridFunction F2 = random_band_limited_vector(g, 50, 4, 2, false);
  std::vector<GridFunction> three = F2.components;
  three.push_back(random_indicator(g, 50, 99, 3));
  VectorGridFunction F3(three);
  GridFunction a = smooth_maximal(F2, prof, sc);
  GridFunction b = smooth_maximal(F3, prof, sc);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].real() >= a[i].real() - 1e-14);
}
