#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpweak/grid.hpp"

namespace lpweak {

// Axis-aligned dyadic cube: side = L / 2^level, block coordinates per axis in
// [0, 2^level). Cubes at one level tile the domain; parent/child relations
// are integer shifts.
struct DyadicCube {
  int level = 0;
  std::vector<long> coords;

  long side_cells(const Grid& g) const {
    return static_cast<long>(g.samples) >> level;
  }
  double side(const Grid& g) const { return g.length / std::exp2(level); }
  // continuous center coordinate per axis
  double center(const Grid& g, int axis) const {
    return -0.5 * g.length + (static_cast<double>(coords[axis]) + 0.5) * side(g);
  }
  // first cell index per axis
  long first_cell(const Grid& g, int axis) const { return coords[axis] * side_cells(g); }
};

// Cell mask of an open set: nonzero entries belong to Omega.
std::vector<std::uint8_t> threshold_mask(const GridFunction& field, double alpha);

// Periodic Chebyshev distance (in cells) from every cell to the nearest cell
// outside the mask; 0 on the complement. Throws if the complement is empty.
std::vector<long> chebyshev_distance_to_complement(const Grid& grid,
                                                   const std::vector<std::uint8_t>& mask);

// Grid-metric cube geometry used by the decomposition:
//   diameter = (side_cells - 1/2) * h,  distance = h * min over cube cells of
// the Chebyshev cell distance to the complement. The cubes returned by
// whitney_decompose satisfy diameter < distance <= 4 * diameter.
double cube_diameter(const Grid& grid, const DyadicCube& cube);
double cube_distance_to_complement(const Grid& grid, const std::vector<long>& dist,
                                   const DyadicCube& cube);

// Maximal dyadic cubes Q inside the mask with side_cells(Q) <= min cell
// distance to the complement. Disjoint, they tile the masked cells exactly.
// Empty mask -> empty list; full mask -> error (no exterior).
std::vector<DyadicCube> whitney_decompose(const Grid& grid,
                                          const std::vector<std::uint8_t>& mask);

// Number of dilated cubes (concentric, side scaled by `factor`) containing
// each cell center.
std::vector<int> dilated_overlap_counts(const Grid& grid,
                                        const std::vector<DyadicCube>& cubes,
                                        double factor);

// Sparse nonnegative samples attached to one cube.
struct PartitionBump {
  DyadicCube cube;
  std::vector<std::size_t> cells;
  std::vector<double> values;

  GridFunction to_grid_function(const Grid& grid) const;
};

// Smooth bumps subordinate to the dilated cubes b*Q, normalized to sum to
// exactly 1 on the masked cells and vanish elsewhere. Requires 1 < b < a.
std::vector<PartitionBump> partition_of_unity(const Grid& grid,
                                              const std::vector<DyadicCube>& cubes,
                                              const std::vector<std::uint8_t>& mask,
                                              double a, double b);

// Weighted polynomial data in the scaled monomial basis ((x-c)/scale)^beta,
// graded order.
struct PolyProjection {
  std::vector<std::vector<int>> exponents;
  std::vector<cplx> coeffs;
  std::vector<double> center;
  double scale = 1.0;
  double condition = 0.0;

  cplx evaluate(const std::vector<double>& x) const;
};

// Degree-<=N polynomial matching the phi-weighted moments of f about
// `center`: <P m_beta phi> = <f m_beta phi> for |beta| <= N. Throws when the
// weight is degenerate (support below 32 cells or Gram condition > 1e12),
// reporting the condition number.
PolyProjection polynomial_projection(const GridFunction& f, const GridFunction& weight,
                                     const std::vector<double>& center, int N);

struct BadPart {
  DyadicCube cube;
  std::vector<std::size_t> cells;
  std::vector<std::vector<cplx>> component_values;  // [component][cell]
};

struct CZDecomposition {
  double alpha = 0.0;
  int degree = 0;
  std::vector<std::uint8_t> mask;
  std::vector<DyadicCube> cubes;
  std::vector<PartitionBump> phis;
  VectorGridFunction good;
  std::vector<BadPart> bad;

  VectorGridFunction bad_of_cube(std::size_t j) const;
  VectorGridFunction bad_total() const;
};

// Split F at height alpha against the maximal proxy: Omega = {proxy > alpha},
// Whitney cubes, partition of unity, per-cube moment-matched polynomial
// subtraction. bad_j = (f_k - P_j^k) phi_j on each cube; good = F - sum bad_j.
// Empty Omega returns good = F with no cubes; alpha <= 0 is an error.
CZDecomposition cz_decompose(const VectorGridFunction& F, double alpha, double p, int N,
                             const GridFunction& proxy);

// gamma * lambda with gamma = (A2^{p2} A1^{-p1})^{1/(p1-p2)}.
double split_height(double lambda, double A1, double A2, double p1, double p2);

// Pointwise split by l2 magnitude: first = F on {|F| > alpha}, second = rest.
std::pair<VectorGridFunction, VectorGridFunction> split_at_height(
    const VectorGridFunction& F, double alpha);

// Directory layout: cubes.csv, good_<k>.bin, bad_<j>.bin, manifest.json.
void save_cz_decomposition(const CZDecomposition& cz, const Grid& grid,
                           const std::string& directory);

}  // namespace lpweak
