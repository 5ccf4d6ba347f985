#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "lpweak/families.hpp"
#include "lpweak/maximal.hpp"
#include "lpweak/quasinorm.hpp"
#include "lpweak/whitney_cz.hpp"

using namespace lpweak;

namespace {

std::vector<std::uint8_t> interval_mask(const Grid& g, double a, double b) {
  std::vector<std::uint8_t> mask(g.cell_count(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double x = g.coord(i);
    if (x > a && x < b) mask[i] = 1;
  }
  return mask;
}

}  // namespace

TEST_CASE("whitney decomposition of trivial and simple sets") {
  Grid g = make_grid(1, 16.0, 1024);
  CHECK(whitney_decompose(g, std::vector<std::uint8_t>(g.cell_count(), 0)).empty());
  CHECK_THROWS_AS(whitney_decompose(g, std::vector<std::uint8_t>(g.cell_count(), 1)),
                  std::domain_error);

  const auto mask = interval_mask(g, 0.0, 1.0);
  const auto cubes = whitney_decompose(g, mask);
  REQUIRE_FALSE(cubes.empty());
  const auto dt = chebyshev_distance_to_complement(g, mask);
  std::vector<int> covered(g.cell_count(), 0);
  for (const auto& c : cubes) {
    const double diam = cube_diameter(g, c);
    const double dist = cube_distance_to_complement(g, dt, c);
    CHECK(diam < dist);
    CHECK(dist <= 4.0 * diam);
    for (long dx = 0; dx < c.side_cells(g); ++dx)
      covered[static_cast<std::size_t>(c.first_cell(g, 0) + dx)] += 1;
  }
  for (std::size_t i = 0; i < covered.size(); ++i)
    CHECK(covered[i] == (mask[i] ? 1 : 0));
}

TEST_CASE("whitney geometry and overlap on random masks") {
  for (int dim : {1, 2}) {
    Grid g = dim == 1 ? make_grid(1, 16.0, 1024) : make_grid(2, 8.0, 64);
    for (std::uint64_t inst = 0; inst < 3; ++inst) {
      const auto mask = random_open_mask(g, 5, inst);
      const auto cubes = whitney_decompose(g, mask);
      const auto dt = chebyshev_distance_to_complement(g, mask);
      for (const auto& c : cubes) {
        const double diam = cube_diameter(g, c);
        const double dist = cube_distance_to_complement(g, dt, c);
        CHECK(diam < dist);
        CHECK(dist <= 4.0 * diam);
      }
      const auto overlap = dilated_overlap_counts(g, cubes, 9.0 / 8.0);
      const int bound = dim == 1 ? 12 : 144;
      for (int c : overlap) CHECK(c <= bound);
    }
  }
}

TEST_CASE("partition of unity: single isolated cube and exact partition") {
  Grid g = make_grid(1, 16.0, 1024);
  // one dyadic block well separated from the boundary of the open set
  const auto mask = interval_mask(g, -4.0, 4.0);
  const auto cubes = whitney_decompose(g, mask);
  const auto phis = partition_of_unity(g, cubes, mask, 9.0 / 8.0, 17.0 / 16.0);
  REQUIRE(phis.size() == cubes.size());

  // the largest cube sits in the middle; its bump is 1 well inside
  std::size_t big = 0;
  for (std::size_t j = 0; j < cubes.size(); ++j)
    if (cubes[j].side_cells(g) > cubes[big].side_cells(g)) big = j;
  const auto& cube = cubes[big];
  const std::size_t mid = static_cast<std::size_t>(cube.first_cell(g, 0) +
                                                   cube.side_cells(g) / 2);
  GridFunction phi = phis[big].to_grid_function(g);
  CHECK(phi[mid].real() == doctest::Approx(1.0));

  std::vector<double> total(g.cell_count(), 0.0);
  for (const auto& pb : phis)
    for (std::size_t k = 0; k < pb.cells.size(); ++k) total[pb.cells[k]] += pb.values[k];
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (mask[i])
      CHECK(std::abs(total[i] - 1.0) <= 1e-10);
    else
      CHECK(total[i] == 0.0);
  }
  CHECK_THROWS_AS(partition_of_unity(g, cubes, mask, 17.0 / 16.0, 9.0 / 8.0),
                  std::invalid_argument);
}

TEST_CASE("partition bumps obey scale-free derivative bounds across octaves") {
  Grid g = make_grid(1, 16.0, 2048);
  const auto mask = interval_mask(g, 0.0, 4.0);
  const auto cubes = whitney_decompose(g, mask);
  const auto phis = partition_of_unity(g, cubes, mask, 9.0 / 8.0, 17.0 / 16.0);

  long min_side = 1 << 20, max_side = 0;
  double worst1 = 0.0, worst2 = 0.0;
  for (std::size_t j = 0; j < cubes.size(); ++j) {
    const double lj = cubes[j].side(g);
    min_side = std::min(min_side, cubes[j].side_cells(g));
    max_side = std::max(max_side, cubes[j].side_cells(g));
    GridFunction phi = phis[j].to_grid_function(g);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 1; i + 1 < phi.size(); ++i) {
      d1 = std::max(d1, std::abs(phi[i + 1].real() - phi[i - 1].real()) / (2.0 * g.spacing));
      d2 = std::max(d2, std::abs(phi[i + 1].real() - 2.0 * phi[i].real() +
                                 phi[i - 1].real()) /
                            (g.spacing * g.spacing));
    }
    worst1 = std::max(worst1, d1 * lj);
    worst2 = std::max(worst2, d2 * lj * lj);
  }
  CHECK(max_side >= 8 * min_side);  // at least three octaves of cube sizes
  CHECK(worst1 <= 600.0);
  CHECK(worst2 <= 300000.0);
}

TEST_CASE("polynomial projection: fixed points, symmetry, oracle, degeneracy") {
  Grid g = make_grid(1, 16.0, 1024);
  GridFunction weight(g);
  for (std::size_t i = 0; i < weight.size(); ++i) {
    const double u = (g.coord(i) - 0.5) / 1.5;
    if (std::abs(u) < 1.0) weight[i] = std::exp(-1.0 / (1.0 - u * u));
  }

  // a polynomial of degree <= N is reproduced
  GridFunction poly(g);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double x = g.coord(i);
    poly[i] = 1.5 - 0.25 * x + 0.75 * x * x;
  }
  PolyProjection pr = polynomial_projection(poly, weight, {0.5}, 2);
  for (double x : {-0.5, 0.3, 1.2}) {
    CHECK(std::abs(pr.evaluate({x}) - cplx{1.5 - 0.25 * x + 0.75 * x * x, 0.0}) <= 1e-8);
  }

  // odd data against an even weight has zero mean
  GridFunction odd(g);
  for (std::size_t i = 0; i < odd.size(); ++i) odd[i] = std::sin(g.coord(i) - 0.5);
  PolyProjection pr0 = polynomial_projection(odd, weight, {0.5}, 0);
  CHECK(std::abs(pr0.coeffs[0]) <= 1e-10);

  // dense normal-equations oracle at degree 1
  GridFunction f = random_band_limited(g, 40, 1, false);
  PolyProjection pr1 = polynomial_projection(f, weight, {0.5}, 1);
  double a00 = 0, a01 = 0, a11 = 0;
  cplx b0{0, 0}, b1{0, 0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = weight[i].real();
    if (w <= 0.0) continue;
    const double u = (g.coord(i) - 0.5) / pr1.scale;
    a00 += w;
    a01 += w * u;
    a11 += w * u * u;
    b0 += w * f[i];
    b1 += w * f[i] * u;
  }
  const double det = a00 * a11 - a01 * a01;
  const cplx c0 = (b0 * a11 - b1 * a01) / det;
  const cplx c1 = (b1 * a00 - b0 * a01) / det;
  CHECK(std::abs(pr1.coeffs[0] - c0) <= 1e-6 * (1.0 + std::abs(c0)));
  CHECK(std::abs(pr1.coeffs[1] - c1) <= 1e-6 * (1.0 + std::abs(c1)));

  // degenerate weights are rejected with a condition diagnostic
  GridFunction tiny(g);
  tiny[10] = 1.0;
  tiny[11] = 0.5;
  CHECK_THROWS_WITH_AS(polynomial_projection(f, tiny, {g.coord(10)}, 2),
                       doctest::Contains("condition"), std::runtime_error);
}

TEST_CASE("split height formula") {
  CHECK(split_height(3.0, 1.0, 1.0, 1.0, 2.0) == doctest::Approx(3.0));
  CHECK(split_height(1.0, 1.0, 2.0, 1.0, 2.0) == doctest::Approx(0.25));
  const double a1 = split_height(1.0, 0.7, 1.9, 0.8, 2.5);
  CHECK(split_height(5.0, 0.7, 1.9, 0.8, 2.5) == doctest::Approx(5.0 * a1));
  CHECK_THROWS_AS(split_height(1.0, 1.0, 1.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(split_height(-1.0, 1.0, 1.0, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("height split: indicators and layer-cake bounds") {
  Grid g = make_grid(1, 16.0, 2048);
  GridFunction chi = random_indicator(g, 9, 0, 3);
  VectorGridFunction F(std::vector<GridFunction>{chi});
  {
    auto [above, below] = split_at_height(F, 1.5);
    CHECK(above.l2_magnitude().max_abs() == 0.0);
    for (std::size_t i = 0; i < chi.size(); ++i)
      CHECK(below.components[0][i] == chi[i]);
  }
  {
    auto [above, below] = split_at_height(F, 0.5);
    CHECK(below.l2_magnitude().max_abs() == 0.0);
    for (std::size_t i = 0; i < chi.size(); ++i)
      CHECK(above.components[0][i] == chi[i]);
  }

  // layer-cake bounds verified against direct Riemann-sum integration
  VectorGridFunction R = random_band_limited_vector(g, 17, 1, 3, false);
  GridFunction mag = R.l2_magnitude();
  const double p = 1.5, p1 = 1.0, p2 = 3.0;
  const double weak_p = weak_lp(mag, p).value;
  for (double alpha : {0.1, 0.4, 0.8}) {
    auto [above, below] = split_at_height(R, alpha);
    const double la = std::pow(lp_norm(above.l2_magnitude(), p1).value, p1);
    const double lb = std::pow(lp_norm(below.l2_magnitude(), p2).value, p2);
    const double bound_a = p / (p - p1) * std::pow(alpha, p1 - p) * std::pow(weak_p, p);
    const double bound_b = p2 / (p2 - p) * std::pow(alpha, p2 - p) * std::pow(weak_p, p) -
                           distribution_function(mag, alpha) * std::pow(alpha, p2);
    CHECK(la <= bound_a * (1.0 + 1e-9));
    CHECK(lb <= bound_b * (1.0 + 1e-9));
  }
  CHECK_THROWS_AS(split_at_height(F, -0.1), std::invalid_argument);
}

TEST_CASE("cz decomposition: trivial height and small reconstruction") {
  Grid g = make_grid(1, 16.0, 512);
  VectorGridFunction F = random_band_limited_vector(g, 23, 0, 2, false);
  ScaleSet sc = ScaleSet::geometric(g, 2);
  const auto dict = build_dictionary(1, 2, 8, 2);
  GridFunction proxy = grand_maximal(F, dict, sc);

  CZDecomposition trivial = cz_decompose(F, 2.0 * proxy.max_abs(), 1.0, 2, proxy);
  CHECK(trivial.cubes.empty());
  for (std::size_t k = 0; k < F.count(); ++k)
    for (std::size_t i = 0; i < F.components[k].size(); ++i)
      CHECK(trivial.good.components[k][i] == F.components[k][i]);

  CHECK_THROWS_AS(cz_decompose(F, -1.0, 1.0, 2, proxy), std::invalid_argument);
  CHECK_THROWS_AS(cz_decompose(F, 0.5, 1.0, 0, proxy), std::invalid_argument);

  CZDecomposition cz = cz_decompose(F, 0.5 * proxy.max_abs(), 1.0, 2, proxy);
  VectorGridFunction bad = cz.bad_total();
  for (std::size_t k = 0; k < F.count(); ++k)
    for (std::size_t i = 0; i < F.components[k].size(); ++i)
      CHECK(std::abs(F.components[k][i] - cz.good.components[k][i] -
                     bad.components[k][i]) <= 1e-10);
}

TEST_CASE("cz decomposition serializes to a directory") {
  Grid g = make_grid(1, 16.0, 512);
  VectorGridFunction F = random_band_limited_vector(g, 29, 0, 2, false);
  ScaleSet sc = ScaleSet::geometric(g, 2);
  const auto dict = build_dictionary(1, 2, 8, 2);
  GridFunction proxy = grand_maximal(F, dict, sc);
  CZDecomposition cz = cz_decompose(F, 0.5 * proxy.max_abs(), 1.0, 2, proxy);

  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "lpweak_cz_test";
  fs::remove_all(dir);
  save_cz_decomposition(cz, g, dir.string());
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "cubes.csv"));
  CHECK(fs::exists(dir / "good_0.bin"));
  CHECK(fs::exists(dir / "good_1.bin"));
  if (!cz.bad.empty()) CHECK(fs::exists(dir / "bad_0.bin"));
  GridFunction good0 = load_grid_function((dir / "good_0.bin").string());
  for (std::size_t i = 0; i < good0.size(); ++i)
    CHECK(good0[i] == cz.good.components[0][i]);
  fs::remove_all(dir);
}
