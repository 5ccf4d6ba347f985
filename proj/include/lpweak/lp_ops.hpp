#pragma once

#include <vector>

#include "lpweak/bumps.hpp"
#include "lpweak/grid.hpp"

namespace lpweak {

// Dyadic scale window with an optional arithmetic-progression restriction
// (indices j in [j_min, j_max] with j = residue mod stride).
struct ScaleRange {
  int j_min = 0;
  int j_max = 0;
  unsigned stride = 1;
  unsigned residue = 0;

  // all scales whose frequency band meets the grid's positive spectrum
  static ScaleRange full(const Grid& grid, const LpBump& bump);
  ScaleRange with_residue(unsigned q, unsigned r) const;

  std::vector<int> indices() const;
  bool contains(int j) const;
};

struct BandResult {
  GridFunction value;
  bool in_band = true;  // false means the request fell outside the grid's band
};

// Frequency projection onto the dyadic band at scale j: spectral
// multiplication by the bump profile evaluated at 2^{-j} |xi|.
BandResult band_project(const GridFunction& f, int j, const LpBump& bump);

// Sum of band projections over the range (single spectral pass).
GridFunction band_sum(const GridFunction& f, const LpBump& bump, const ScaleRange& range);

// Pointwise l2 aggregate of the band projections over the range;
// a nonnegative real physical function.
GridFunction square_function(const GridFunction& f, const LpBump& bump,
                             const ScaleRange& range);

// Same, with the projections taken with the given radial profile instead of
// the mother bump (used for block-kernel square functions).
GridFunction square_function_profile(const GridFunction& f, const RadialProfile& profile,
                                     const ScaleRange& range);

// sum_j E_j(f_j) where E_j multiplies by envelope(2^{-j} xi); the components
// of F are indexed by the scales in `range` (counts must match).
GridFunction kernel_family_apply(const VectorGridFunction& F, const DerivedKernels& kernels,
                                 const ScaleRange& range);

}  // namespace lpweak
