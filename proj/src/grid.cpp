#include "lpweak/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace lpweak {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// One cached FFTW plan per (dim, samples, sign). Plans are built on scratch
// buffers owned by the cache; executions copy through those buffers under the
// cache lock (FFTW planning and plan execution on shared buffers are not
// thread-safe).
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  void execute(int dim, std::size_t s, int sign, const cplx* in, cplx* out) {
    std::lock_guard<std::mutex> lock(mutex_);
    Key key{dim, s, sign};
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      Entry e;
      const std::size_t n = dim == 1 ? s : s * s;
      e.buf_in = fftw_alloc_complex(n);
      e.buf_out = fftw_alloc_complex(n);
      const int si = static_cast<int>(s);
      e.plan = dim == 1
                   ? fftw_plan_dft_1d(si, e.buf_in, e.buf_out, sign, FFTW_ESTIMATE)
                   : fftw_plan_dft_2d(si, si, e.buf_in, e.buf_out, sign, FFTW_ESTIMATE);
      it = entries_.emplace(key, e).first;
    }
    const std::size_t n = dim == 1 ? s : s * s;
    std::memcpy(it->second.buf_in, in, n * sizeof(cplx));
    fftw_execute(it->second.plan);
    std::memcpy(out, it->second.buf_out, n * sizeof(cplx));
  }

 private:
  using Key = std::tuple<int, std::size_t, int>;
  struct Entry {
    fftw_plan plan = nullptr;
    fftw_complex* buf_in = nullptr;
    fftw_complex* buf_out = nullptr;
  };
  std::map<Key, Entry> entries_;
  std::mutex mutex_;

  ~PlanCache() {
    for (auto& [k, e] : entries_) {
      fftw_destroy_plan(e.plan);
      fftw_free(e.buf_in);
      fftw_free(e.buf_out);
    }
  }
};

// parity of the summed raw indices; implements the e^{+-i pi (k1+k2)} phase
// that recenters the transform at x = 0 (grid origin sits at index S/2).
inline double center_phase(const Grid& g, std::size_t flat) {
  const std::size_t s = (g.dim == 1) ? flat : g.axis_x(flat) + g.axis_y(flat);
  return (s & 1u) ? -1.0 : 1.0;
}

}  // namespace

double Grid::freq_abs(std::size_t flat) const {
  if (dim == 1) {
    return std::abs(static_cast<double>(mode(flat))) / length;
  }
  const double mx = static_cast<double>(mode(axis_x(flat)));
  const double my = static_cast<double>(mode(axis_y(flat)));
  return std::sqrt(mx * mx + my * my) / length;
}

double Grid::point_distance(std::size_t flat_a, std::size_t flat_b) const {
  const long s = static_cast<long>(samples);
  auto axis_dist = [&](long a, long b) {
    long d = std::abs(a - b) % s;
    d = std::min(d, s - d);
    return static_cast<double>(d) * spacing;
  };
  if (dim == 1) return axis_dist(static_cast<long>(flat_a), static_cast<long>(flat_b));
  const double dx = axis_dist(static_cast<long>(axis_x(flat_a)), static_cast<long>(axis_x(flat_b)));
  const double dy = axis_dist(static_cast<long>(axis_y(flat_a)), static_cast<long>(axis_y(flat_b)));
  return std::hypot(dx, dy);
}

std::size_t Grid::snap(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim)
    throw std::invalid_argument("snap: location dimension mismatch");
  auto snap_axis = [&](double v) {
    if (v < -0.5 * length || v >= 0.5 * length)
      throw std::domain_error("snap: location outside fundamental domain");
    long i = std::lround((v + 0.5 * length) / spacing);
    const long s = static_cast<long>(samples);
    if (i >= s) i -= s;
    if (i < 0) i += s;
    return static_cast<std::size_t>(i);
  };
  const std::size_t ix = snap_axis(x[0]);
  const std::size_t iy = dim == 2 ? snap_axis(x[1]) : 0;
  return index_of(ix, iy);
}

Grid make_grid(int dim, double length, std::size_t samples_per_axis) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("make_grid: unsupported dimension (must be 1 or 2)");
  if (!(length > 0.0)) throw std::invalid_argument("make_grid: length must be positive");
  if (!is_power_of_two(samples_per_axis) || samples_per_axis < 8)
    throw std::invalid_argument("make_grid: samples_per_axis must be a power of two >= 8");
  Grid g;
  g.dim = dim;
  g.length = length;
  g.samples = samples_per_axis;
  g.spacing = length / static_cast<double>(samples_per_axis);
  return g;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const cplx& v : values) m = std::max(m, std::abs(v));
  return m;
}

cplx GridFunction::integral() const {
  cplx s{0.0, 0.0};
  for (const cplx& v : values) s += v;
  return s * grid.cell_measure();
}

VectorGridFunction::VectorGridFunction(std::vector<GridFunction> comps)
    : components(std::move(comps)) {
  if (components.empty())
    throw std::invalid_argument("VectorGridFunction: needs at least one component");
  for (const auto& c : components)
    if (!(c.grid == components.front().grid))
      throw std::invalid_argument("VectorGridFunction: components on different grids");
}

GridFunction VectorGridFunction::l2_magnitude() const {
  GridFunction out(grid(), Tag::physical);
  for (const auto& c : components)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::norm(c[i]);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(out[i].real());
  return out;
}

GridFunction VectorGridFunction::lq_magnitude(double q) const {
  if (!(q > 0.0)) throw std::invalid_argument("lq_magnitude: q must be positive");
  GridFunction out(grid(), Tag::physical);
  for (const auto& c : components)
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] += std::pow(std::abs(c[i]), q);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::pow(out[i].real(), 1.0 / q);
  return out;
}

GridFunction forward_transform(const GridFunction& f) {
  if (f.tag != Tag::physical)
    throw std::invalid_argument("forward_transform: expected physical tag");
  GridFunction out(f.grid, Tag::spectral);
  PlanCache::instance().execute(f.grid.dim, f.grid.samples, FFTW_FORWARD,
                                f.values.data(), out.values.data());
  const double hmeas = f.grid.cell_measure();
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] *= hmeas * center_phase(f.grid, i);
  return out;
}

GridFunction inverse_transform(const GridFunction& f) {
  if (f.tag != Tag::spectral)
    throw std::invalid_argument("inverse_transform: expected spectral tag");
  GridFunction phased(f.grid, Tag::spectral);
  for (std::size_t i = 0; i < f.size(); ++i)
    phased[i] = f[i] * center_phase(f.grid, i);
  GridFunction out(f.grid, Tag::physical);
  PlanCache::instance().execute(f.grid.dim, f.grid.samples, FFTW_BACKWARD,
                                phased.values.data(), out.values.data());
  const double scale = 1.0 / f.grid.domain_measure();
  for (cplx& v : out.values) v *= scale;
  return out;
}

GridFunction convolve(const GridFunction& f, const GridFunction& kernel) {
  if (!(f.grid == kernel.grid))
    throw std::invalid_argument("convolve: grid mismatch");
  if (f.tag != Tag::physical || kernel.tag != Tag::physical)
    throw std::invalid_argument("convolve: both inputs must be physical");
  GridFunction fh = forward_transform(f);
  GridFunction kh = forward_transform(kernel);
  for (std::size_t i = 0; i < fh.size(); ++i) fh[i] *= kh[i];
  return inverse_transform(fh);
}

GridFunction dilate(const GridFunction& kernel, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("dilate: t must be positive");
  if (kernel.tag != Tag::physical)
    throw std::invalid_argument("dilate: kernel must be physical");
  const Grid& g = kernel.grid;
  GridFunction kh = forward_transform(kernel);

  // effective spectral support: largest active integer mode per axis
  long m_max = 0;
  const double floor_level = 1e-13 * kh.max_abs();
  for (std::size_t i = 0; i < kh.size(); ++i) {
    if (std::abs(kh[i]) > floor_level) {
      long mx = std::labs(g.mode(g.axis_x(i)));
      long my = g.dim == 2 ? std::labs(g.mode(g.axis_y(i))) : 0;
      m_max = std::max({m_max, mx, my});
    }
  }
  const long half = static_cast<long>(g.samples) / 2;
  if (m_max > 0 && t * static_cast<double>(half) < static_cast<double>(m_max))
    throw std::domain_error("dilate: scale_underflow (kernel would alias at this t)");

  // evaluate the trigonometric interpolant at x/t; modes above the floor only
  std::vector<std::size_t> active;
  active.reserve(kh.size());
  for (std::size_t i = 0; i < kh.size(); ++i)
    if (std::abs(kh[i]) > floor_level) active.push_back(i);

  // The kernel is the localized representative on the fundamental domain;
  // compressed arguments landing outside it read the (decayed) zero extension
  // rather than a wrapped periodic copy.
  GridFunction out(g, Tag::physical);
  const double two_pi_over_L = 2.0 * M_PI / g.length;
  const double tn = g.dim == 1 ? t : t * t;
  const double norm = 1.0 / g.domain_measure();
  auto inside = [&](double y) { return y >= -0.5 * g.length && y < 0.5 * g.length; };
  if (g.dim == 1) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double y = g.coord(i) / t;
      if (!inside(y)) continue;
      cplx acc{0.0, 0.0};
      for (std::size_t a : active) {
        const double ph = two_pi_over_L * static_cast<double>(g.mode(a)) * y;
        acc += kh[a] * cplx{std::cos(ph), std::sin(ph)};
      }
      out[i] = acc * norm / tn;
    }
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double yx = g.coord(g.axis_x(i)) / t;
      const double yy = g.coord(g.axis_y(i)) / t;
      if (!inside(yx) || !inside(yy)) continue;
      cplx acc{0.0, 0.0};
      for (std::size_t a : active) {
        const double ph = two_pi_over_L * (static_cast<double>(g.mode(g.axis_x(a))) * yx +
                                           static_cast<double>(g.mode(g.axis_y(a))) * yy);
        acc += kh[a] * cplx{std::cos(ph), std::sin(ph)};
      }
      out[i] = acc * norm / tn;
    }
  }
  return out;
}

GridFunction embed_point_mass(const Grid& grid, const std::vector<double>& location,
                              double weight) {
  GridFunction out(grid, Tag::physical);
  out[grid.snap(location)] = weight / grid.cell_measure();
  return out;
}

void apply_radial_multiplier(GridFunction& spectral,
                             const std::function<double(double)>& profile) {
  if (spectral.tag != Tag::spectral)
    throw std::invalid_argument("apply_radial_multiplier: expected spectral tag");
  for (std::size_t i = 0; i < spectral.size(); ++i)
    spectral[i] *= profile(spectral.grid.freq_abs(i));
}

GridFunction filter_radial(const GridFunction& physical,
                           const std::function<double(double)>& profile) {
  GridFunction fh = forward_transform(physical);
  apply_radial_multiplier(fh, profile);
  return inverse_transform(fh);
}

double l2_norm_physical(const GridFunction& f) {
  double s = 0.0;
  for (const cplx& v : f.values) s += std::norm(v);
  return std::sqrt(s * f.grid.cell_measure());
}

double l2_norm_spectral(const GridFunction& f_hat) {
  double s = 0.0;
  for (const cplx& v : f_hat.values) s += std::norm(v);
  return std::sqrt(s / f_hat.grid.domain_measure());
}

namespace {
constexpr char kMagic[4] = {'L', 'P', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T read_le(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}
}  // namespace

void save_grid_function(const GridFunction& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_grid_function: cannot open " + path);
  os.write(kMagic, 4);
  write_le<std::uint32_t>(os, kVersion);
  write_le<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim));
  write_le<double>(os, f.grid.length);
  write_le<std::uint64_t>(os, f.grid.samples);
  write_le<std::uint32_t>(os, f.tag == Tag::physical ? 0u : 1u);
  for (const cplx& v : f.values) {
    write_le<double>(os, v.real());
    write_le<double>(os, v.imag());
  }
  if (!os) throw std::runtime_error("save_grid_function: write failed for " + path);
}

GridFunction load_grid_function(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_grid_function: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("load_grid_function: bad magic in " + path);
  const auto version = read_le<std::uint32_t>(is);
  if (version != kVersion) throw std::runtime_error("load_grid_function: bad version");
  const auto dim = static_cast<int>(read_le<std::uint32_t>(is));
  const double length = read_le<double>(is);
  const auto samples = static_cast<std::size_t>(read_le<std::uint64_t>(is));
  const auto tag_raw = read_le<std::uint32_t>(is);
  GridFunction f(make_grid(dim, length, samples),
                 tag_raw == 0 ? Tag::physical : Tag::spectral);
  for (cplx& v : f.values) {
    const double re = read_le<double>(is);
    const double im = read_le<double>(is);
    v = cplx{re, im};
  }
  if (!is) throw std::runtime_error("load_grid_function: truncated file " + path);
  return f;
}

}  // namespace lpweak
