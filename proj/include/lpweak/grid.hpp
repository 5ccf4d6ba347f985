#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace lpweak {

using cplx = std::complex<double>;

enum class Tag { physical, spectral };

// Uniform periodic grid on [-L/2, L/2)^dim, dim in {1,2}.
// Cell centers are x_i = -L/2 + i*h with h = L/S; mode k of the transform
// carries the continuum frequency xi = k/L with k in [-S/2, S/2).
struct Grid {
  int dim = 1;
  double length = 0.0;
  std::size_t samples = 0;
  double spacing = 0.0;

  std::size_t cell_count() const {
    return dim == 1 ? samples : samples * samples;
  }
  double cell_measure() const {
    return dim == 1 ? spacing : spacing * spacing;
  }
  double domain_measure() const {
    return dim == 1 ? length : length * length;
  }
  double coord(std::size_t axis_index) const {
    return -0.5 * length + static_cast<double>(axis_index) * spacing;
  }
  // frequency integer of a raw FFT index along one axis, in [-S/2, S/2)
  long mode(std::size_t axis_index) const {
    const long s = static_cast<long>(samples);
    const long k = static_cast<long>(axis_index);
    return k < s / 2 ? k : k - s;
  }
  double nyquist() const { return static_cast<double>(samples) / (2.0 * length); }

  std::size_t index_of(std::size_t ix, std::size_t iy = 0) const {
    return dim == 1 ? ix : iy * samples + ix;
  }
  std::size_t axis_x(std::size_t flat) const { return dim == 1 ? flat : flat % samples; }
  std::size_t axis_y(std::size_t flat) const { return dim == 1 ? 0 : flat / samples; }

  // Euclidean frequency magnitude of a flat spectral index.
  double freq_abs(std::size_t flat) const;
  // Periodic Euclidean distance between two cell centers.
  double point_distance(std::size_t flat_a, std::size_t flat_b) const;
  // Index of the cell whose center is nearest to x (componentwise snap).
  std::size_t snap(const std::vector<double>& x) const;

  bool operator==(const Grid&) const = default;
};

Grid make_grid(int dim, double length, std::size_t samples_per_axis);

struct GridFunction {
  Grid grid;
  Tag tag = Tag::physical;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g, Tag t = Tag::physical)
      : grid(g), tag(t), values(g.cell_count(), cplx{0.0, 0.0}) {}

  std::size_t size() const { return values.size(); }
  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }

  double max_abs() const;
  // Riemann-sum integral h^dim * sum of values.
  cplx integral() const;
};

// Sequence of grid functions sharing one grid, with pointwise l2 magnitude.
struct VectorGridFunction {
  std::vector<GridFunction> components;

  VectorGridFunction() = default;
  explicit VectorGridFunction(std::vector<GridFunction> comps);

  std::size_t count() const { return components.size(); }
  const Grid& grid() const { return components.front().grid; }

  // pointwise ( sum_k |f_k(x)|^2 )^(1/2), a real-valued physical function
  GridFunction l2_magnitude() const;
  // pointwise l^q aggregate, q > 0
  GridFunction lq_magnitude(double q) const;
};

GridFunction forward_transform(const GridFunction& f);
GridFunction inverse_transform(const GridFunction& f);

// Periodic convolution with Riemann-sum normalization h^dim, computed
// spectrally: forward(convolve(f,g)) = forward(f) .* forward(g) exactly.
GridFunction convolve(const GridFunction& f, const GridFunction& kernel);

// Samples of t^{-dim} * kernel(x/t), resampled on the same grid by evaluating
// the trigonometric interpolant of `kernel` at x/t. Rejects scales that would
// push the kernel's spectral support past the Nyquist frequency.
GridFunction dilate(const GridFunction& kernel, double t);

// Single-cell spike carrying weight/h^dim at the cell nearest to `location`,
// so that the Riemann-sum integral equals `weight`.
GridFunction embed_point_mass(const Grid& grid, const std::vector<double>& location,
                              double weight);

// Multiply a spectrum in place by a radial function of |xi|.
void apply_radial_multiplier(GridFunction& spectral,
                             const std::function<double(double)>& profile);

// forward -> multiply by profile(|xi|) -> inverse, for physical input.
GridFunction filter_radial(const GridFunction& physical,
                           const std::function<double(double)>& profile);

// L2 norms on both sides of the transform (Riemann sum vs 1/L^dim-weighted
// spectral sum); equal by the discrete Plancherel identity.
double l2_norm_physical(const GridFunction& f);
double l2_norm_spectral(const GridFunction& f_hat);

// Flat binary serialization: little-endian header (magic, version, dim, L, S,
// tag) followed by interleaved re/im 64-bit floats.
void save_grid_function(const GridFunction& f, const std::string& path);
GridFunction load_grid_function(const std::string& path);

}  // namespace lpweak
