#pragma once

#include <vector>

#include "lpweak/bumps.hpp"
#include "lpweak/grid.hpp"

namespace lpweak {

// Finite sweep of dilation scales t, geometric with ratio 2^{1/m}, anchored
// so that t = 1 is a member whenever it lies in the admissible window
// [4h, L/4]. Stands in for suprema over all t > 0.
struct ScaleSet {
  std::vector<double> scales;

  static ScaleSet geometric(const Grid& grid, int m = 4);
  bool empty() const { return scales.empty(); }
  std::size_t size() const { return scales.size(); }
};

// Centered maximal average of |f| over balls. In one dimension every integer
// radius up to S/2 is swept (prefix sums); in two dimensions the sweep uses
// the unit cell plus radii from the grid's geometric scale set (disk averages
// via spectral convolution). Always >= |f| pointwise (radius-zero ball).
GridFunction hardy_littlewood_maximal(const GridFunction& f);

// sup over t in scales of the pointwise l2 magnitude of the components
// smoothed by the kernel with Fourier profile `profile` at scale t.
GridFunction smooth_maximal(const VectorGridFunction& F, const RadialProfile& profile,
                            const ScaleSet& scales);

// Cone variant: sup over t and over grid points y with |y - x| <= a t.
GridFunction nontangential_maximal(const VectorGridFunction& F, const RadialProfile& profile,
                                   double aperture, const ScaleSet& scales);

// Translation-weighted variant: sup over t and all grid y of the smoothed
// magnitude at y divided by (1 + |y - x|/t)^b. Exact cell distances are used
// in one dimension; in two dimensions distances are bucketed into rings and
// each ring is weighted at its inner radius (a pointwise upper bound, which
// preserves every chain inequality the exact form satisfies).
GridFunction peetre_maximal(const VectorGridFunction& F, const RadialProfile& profile,
                            double b, const ScaleSet& scales);

// Pointwise max over the dictionary of aperture-1 nontangential maximal
// functions taken with the dictionary elements as kernels (sampled in
// physical space at every scale). A lower bound for the full grand maximal,
// which ranges over the infinite seminorm unit ball.
GridFunction grand_maximal(const VectorGridFunction& F,
                           const std::vector<DictionaryEntry>& dictionary,
                           const ScaleSet& scales);

// Aperture-1 nontangential maximal function with a single closed-form kernel.
GridFunction nontangential_with_kernel(const VectorGridFunction& F, const TestFunction& kernel,
                                       const ScaleSet& scales, double aperture = 1.0);

// sup over t of |k_t * f| for a closed-form kernel (aperture-0 envelope);
// used for smoothed-envelope decay measurements.
GridFunction smooth_envelope_with_kernel(const GridFunction& f, const TestFunction& kernel,
                                         const ScaleSet& scales);

}  // namespace lpweak
