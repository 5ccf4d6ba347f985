#include "lpweak/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lpweak/whitney_cz.hpp"

namespace lpweak {

namespace {
// splitmix64 step
std::uint64_t mix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : state_(seed) {
  state_ ^= 0x51afd6ed558ccd25ull * (stream + 1);
  for (int i = 0; i < 4; ++i) mix(state_);
}

std::uint64_t Rng::bits() { return mix(state_); }

double Rng::uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

std::size_t Rng::index(std::size_t n) { return static_cast<std::size_t>(bits() % n); }

GridFunction random_band_limited(const Grid& grid, std::uint64_t seed, std::uint64_t index,
                                 bool mean_zero) {
  Rng rng(seed, 0x10000 + index);
  const long cap = std::max<long>(2, static_cast<long>(grid.samples) / 8);
  GridFunction spec(grid, Tag::spectral);
  const long s = static_cast<long>(grid.samples);
  auto raw_index = [&](long m) {  // mode -> raw FFT index
    return static_cast<std::size_t>(m >= 0 ? m : m + s);
  };
  if (grid.dim == 1) {
    for (long m = 1; m <= cap; ++m) {
      const cplx c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      spec[raw_index(m)] = c;
      spec[raw_index(-m)] = std::conj(c);
    }
    if (!mean_zero) spec[0] = cplx{rng.uniform(-1.0, 1.0), 0.0};
  } else {
    for (long my = -cap; my <= cap; ++my)
      for (long mx = -cap; mx <= cap; ++mx) {
        if (mx == 0 && my == 0) continue;
        if (my < 0 || (my == 0 && mx < 0)) continue;  // fill one half, mirror
        const cplx c{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        spec[grid.index_of(raw_index(mx), raw_index(my))] = c;
        spec[grid.index_of(raw_index(-mx), raw_index(-my))] = std::conj(c);
      }
    if (!mean_zero) spec[0] = cplx{rng.uniform(-1.0, 1.0), 0.0};
  }
  GridFunction f = inverse_transform(spec);
  const double peak = f.max_abs();
  if (peak > 0.0)
    for (cplx& v : f.values) v /= peak;
  for (cplx& v : f.values) v = cplx{v.real(), 0.0};
  return f;
}

GridFunction random_indicator(const Grid& grid, std::uint64_t seed, std::uint64_t index,
                              int pieces) {
  Rng rng(seed, 0x20000 + index);
  GridFunction f(grid, Tag::physical);
  const int n = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(pieces)));
  for (int k = 0; k < n; ++k) {
    const double cx = rng.uniform(-0.4 * grid.length, 0.4 * grid.length);
    const double wx = rng.uniform(4.0 * grid.spacing, 0.1 * grid.length);
    const double cy = rng.uniform(-0.4 * grid.length, 0.4 * grid.length);
    const double wy = rng.uniform(4.0 * grid.spacing, 0.1 * grid.length);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = grid.coord(grid.axis_x(i));
      if (std::abs(x - cx) > wx) continue;
      if (grid.dim == 2) {
        const double y = grid.coord(grid.axis_y(i));
        if (std::abs(y - cy) > wy) continue;
      }
      f[i] = cplx{1.0, 0.0};
    }
  }
  return f;
}

GridFunction reciprocal_tail(const Grid& grid) {
  if (grid.dim != 1) throw std::invalid_argument("reciprocal_tail: one-dimensional witness");
  GridFunction f(grid, Tag::physical);
  for (std::size_t i = 0; i < f.size(); ++i) {
    // unrolled coordinate in [0, L)
    const double xu = grid.coord(i) + (grid.coord(i) < 0.0 ? grid.length : 0.0);
    if (xu > 1.0) f[i] = cplx{1.0 / xu, 0.0};
  }
  return f;
}

GridFunction power_spike(const Grid& grid, double p, double cap_cells) {
  if (grid.dim != 1) throw std::invalid_argument("power_spike: one-dimensional witness");
  GridFunction f(grid, Tag::physical);
  const double x0 = grid.coord(grid.samples / 2) + 0.5 * grid.spacing;  // cell edge
  const double cap = std::pow(cap_cells * grid.spacing, -1.0 / p);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = std::abs(grid.coord(i) - x0);
    if (d >= 1.0) continue;
    f[i] = cplx{std::min(std::pow(d, -1.0 / p), cap), 0.0};
  }
  return f;
}

GridFunction dipole(const Grid& grid) {
  if (grid.dim != 1) throw std::invalid_argument("dipole: one-dimensional witness");
  GridFunction f = embed_point_mass(grid, {1.0}, 1.0);
  GridFunction g = embed_point_mass(grid, {-1.0}, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] -= g[i];
  return f;
}

VectorGridFunction random_band_limited_vector(const Grid& grid, std::uint64_t seed,
                                              std::uint64_t index, std::size_t count,
                                              bool mean_zero) {
  std::vector<GridFunction> comps;
  comps.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    comps.push_back(random_band_limited(grid, seed, index * 1009 + k, mean_zero));
  return VectorGridFunction(std::move(comps));
}

std::vector<std::uint8_t> random_open_mask(const Grid& grid, std::uint64_t seed,
                                           std::uint64_t index) {
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    GridFunction f = random_band_limited(grid, seed, 0x30000 + index * 31 + attempt, false);
    std::vector<std::uint8_t> mask(f.size(), 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      mask[i] = f[i].real() > 0.25 ? 1 : 0;
      count += mask[i];
    }
    if (count >= f.size() / 10 && count <= f.size() * 9 / 10) return mask;
  }
  throw std::runtime_error("random_open_mask: failed to build a proper mask");
}

}  // namespace lpweak
