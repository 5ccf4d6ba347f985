#pragma once

#include <cstdint>

#include "lpweak/grid.hpp"

namespace lpweak {

// Deterministic uniform draws built on a fixed-width generator so that
// identical (seed, index) pairs reproduce bit-identical instances on every
// platform.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  double uniform();                      // [0, 1)
  double uniform(double a, double b);    // [a, b)
  std::uint64_t bits();
  std::size_t index(std::size_t n);      // [0, n)

 private:
  std::uint64_t state_;
};

// Real-valued field with random spectrum supported in |k| <= samples/8 per
// axis. mean_zero forces a vanishing DC coefficient. Normalized to max 1.
GridFunction random_band_limited(const Grid& grid, std::uint64_t seed, std::uint64_t index,
                                 bool mean_zero);

// Indicator of a random union of up to `pieces` intervals / rectangles.
GridFunction random_indicator(const Grid& grid, std::uint64_t seed, std::uint64_t index,
                              int pieces);

// 1/x on (1, L) in coordinates unrolled to [0, L); the classical witness with
// unit weak-L1 norm.
GridFunction reciprocal_tail(const Grid& grid);

// |x - x0|^{-1/p} capped at (cap_cells * h)^{-1/p} and cut off at |x-x0| >= 1,
// with x0 on a cell edge; distribution function 2 lambda^{-p} in the bulk.
GridFunction power_spike(const Grid& grid, double p, double cap_cells);

// delta at +1 minus delta at -1 (single-cell spikes of mass +-1).
GridFunction dipole(const Grid& grid);

// Vector of `count` independent band-limited components.
VectorGridFunction random_band_limited_vector(const Grid& grid, std::uint64_t seed,
                                              std::uint64_t index, std::size_t count,
                                              bool mean_zero);

// Deterministic proper open-set mask (between 10% and 90% of cells) built by
// thresholding a smooth random field; index varies the field.
std::vector<std::uint8_t> random_open_mask(const Grid& grid, std::uint64_t seed,
                                           std::uint64_t index);

}  // namespace lpweak
