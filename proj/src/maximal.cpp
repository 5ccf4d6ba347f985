#include "lpweak/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lpweak {

namespace {

// Sparse-table range-max over one periodic row.
class RowMax {
 public:
  explicit RowMax(const double* data, std::size_t n) : n_(n) {
    levels_ = 1;
    while ((1u << levels_) <= n_) ++levels_;
    table_.assign(levels_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i) table_[0][i] = data[i];
    for (unsigned k = 1; k < levels_; ++k) {
      const std::size_t span = 1u << k;
      for (std::size_t i = 0; i + span <= n_; ++i)
        table_[k][i] = std::max(table_[k - 1][i], table_[k - 1][i + span / 2]);
    }
  }

  // max over the circular window of half-width w centered at c
  double window(long c, long w) const {
    const long n = static_cast<long>(n_);
    long len = 2 * w + 1;
    if (len >= n) return linear(0, n - 1);
    long l = (c - w) % n;
    if (l < 0) l += n;
    const long r = l + len - 1;
    if (r < n) return linear(l, r);
    return std::max(linear(l, n - 1), linear(0, r - n));
  }

 private:
  double linear(long a, long b) const {
    const auto len = static_cast<std::size_t>(b - a + 1);
    unsigned k = 0;
    while ((2u << k) <= len) ++k;
    const std::size_t span = 1u << k;
    return std::max(table_[k][static_cast<std::size_t>(a)],
                    table_[k][static_cast<std::size_t>(b) + 1 - span]);
  }

  std::size_t n_;
  unsigned levels_;
  std::vector<std::vector<double>> table_;
};

// Disk-max structure over a real field (1D: intervals, 2D: Euclidean disks
// decomposed into rows).
class DiskMax {
 public:
  DiskMax(const GridFunction& field) : grid_(field.grid) {
    const std::size_t s = grid_.samples;
    if (grid_.dim == 1) {
      std::vector<double> row(s);
      for (std::size_t i = 0; i < s; ++i) row[i] = field[i].real();
      rows_.emplace_back(row.data(), s);
    } else {
      std::vector<double> row(s);
      for (std::size_t y = 0; y < s; ++y) {
        for (std::size_t x = 0; x < s; ++x) row[x] = field[y * s + x].real();
        rows_.emplace_back(row.data(), s);
      }
    }
  }

  // max over cells within Euclidean index distance `radius` of flat index i
  double query(std::size_t flat, long radius) const {
    if (radius < 0) radius = 0;
    if (grid_.dim == 1) return rows_[0].window(static_cast<long>(flat), radius);
    const long s = static_cast<long>(grid_.samples);
    const long cx = static_cast<long>(grid_.axis_x(flat));
    const long cy = static_cast<long>(grid_.axis_y(flat));
    double best = rows_[static_cast<std::size_t>(cy)].window(cx, radius);
    for (long dy = 1; dy <= radius; ++dy) {
      const long w = static_cast<long>(
          std::floor(std::sqrt(static_cast<double>(radius) * radius - static_cast<double>(dy) * dy)));
      long yl = (cy - dy) % s;
      if (yl < 0) yl += s;
      const long yh = (cy + dy) % s;
      best = std::max(best, rows_[static_cast<std::size_t>(yl)].window(cx, w));
      best = std::max(best, rows_[static_cast<std::size_t>(yh)].window(cx, w));
    }
    return best;
  }

 private:
  Grid grid_;
  std::vector<RowMax> rows_;
};

std::vector<GridFunction> component_spectra(const VectorGridFunction& F) {
  std::vector<GridFunction> out;
  out.reserve(F.count());
  for (const auto& c : F.components) out.push_back(forward_transform(c));
  return out;
}

// l2 magnitude field of the components smoothed at scale t with profile(t |xi|)
GridFunction smoothed_magnitude(const std::vector<GridFunction>& spectra,
                                const RadialProfile& profile, double t) {
  const Grid& g = spectra.front().grid;
  GridFunction acc(g, Tag::physical);
  for (const auto& fh : spectra) {
    GridFunction gh(g, Tag::spectral);
    for (std::size_t i = 0; i < gh.size(); ++i)
      gh[i] = fh[i] * profile(t * g.freq_abs(i));
    GridFunction gphys = inverse_transform(gh);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(gphys[i]);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::sqrt(acc[i].real());
  return acc;
}

// magnitude field of components convolved with a sampled physical kernel
GridFunction convolved_magnitude(const std::vector<GridFunction>& spectra,
                                 const GridFunction& kernel_hat) {
  const Grid& g = spectra.front().grid;
  GridFunction acc(g, Tag::physical);
  for (const auto& fh : spectra) {
    GridFunction gh(g, Tag::spectral);
    for (std::size_t i = 0; i < gh.size(); ++i) gh[i] = fh[i] * kernel_hat[i];
    GridFunction gphys = inverse_transform(gh);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(gphys[i]);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::sqrt(acc[i].real());
  return acc;
}

void pointwise_max_into(GridFunction& target, const GridFunction& other) {
  for (std::size_t i = 0; i < target.size(); ++i)
    target[i] = std::max(target[i].real(), other[i].real());
}

std::vector<long> ring_bucket_radii(long max_radius) {
  std::vector<long> radii;
  long r = 1;
  while (r <= 16 && r <= max_radius) radii.push_back(r++);
  double rr = static_cast<double>(r);
  while (static_cast<long>(rr) <= max_radius) {
    if (radii.empty() || static_cast<long>(rr) > radii.back())
      radii.push_back(static_cast<long>(rr));
    rr *= 1.25;
  }
  if (radii.empty() || radii.back() < max_radius) radii.push_back(max_radius);
  return radii;
}

}  // namespace

ScaleSet ScaleSet::geometric(const Grid& grid, int m) {
  if (m < 1) throw std::invalid_argument("ScaleSet: refinement m must be >= 1");
  const double t_lo = 4.0 * grid.spacing;
  const double t_hi = grid.length / 4.0;
  ScaleSet out;
  if (t_lo > t_hi) return out;
  const double dm = static_cast<double>(m);
  const long k_lo = static_cast<long>(std::ceil(dm * std::log2(t_lo) - 1e-9));
  const long k_hi = static_cast<long>(std::floor(dm * std::log2(t_hi) + 1e-9));
  for (long k = k_lo; k <= k_hi; ++k)
    out.scales.push_back(std::exp2(static_cast<double>(k) / dm));
  return out;
}

GridFunction hardy_littlewood_maximal(const GridFunction& f) {
  const Grid& g = f.grid;
  GridFunction out(g, Tag::physical);
  if (g.dim == 1) {
    const std::size_t s = g.samples;
    std::vector<double> mag(s);
    for (std::size_t i = 0; i < s; ++i) mag[i] = std::abs(f[i]);
    // prefix sums over three periods so every circular window is contiguous
    std::vector<double> pre(3 * s + 1, 0.0);
    for (std::size_t i = 0; i < 3 * s; ++i) pre[i + 1] = pre[i] + mag[i % s];
    const long half = static_cast<long>(s) / 2;
    for (std::size_t i = 0; i < s; ++i) out[i] = mag[i];
    for (long w = 1; w <= half; ++w) {
      const double inv = 1.0 / static_cast<double>(2 * w + 1);
      const bool full = 2 * w + 1 >= static_cast<long>(s);
      for (std::size_t i = 0; i < s; ++i) {
        const long c = static_cast<long>(i) + static_cast<long>(s);
        const double sum =
            full ? pre[s] : pre[static_cast<std::size_t>(c + w + 1)] - pre[static_cast<std::size_t>(c - w)];
        const double avg = full ? sum / static_cast<double>(s) : sum * inv;
        out[i] = std::max(out[i].real(), avg);
      }
    }
    return out;
  }

  // 2D: unit cell plus disk averages at the geometric scale radii
  GridFunction mag(g, Tag::physical);
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(f[i]);
  out = mag;
  std::vector<long> radii = {1, 2, 3};
  for (double t : ScaleSet::geometric(g).scales) {
    const long r = static_cast<long>(std::floor(t / g.spacing));
    if (r > radii.back()) radii.push_back(r);
  }
  GridFunction mag_hat = forward_transform(mag);
  for (long r : radii) {
    GridFunction disk(g, Tag::physical);
    std::size_t count = 0;
    const long s = static_cast<long>(g.samples);
    for (long dy = -r; dy <= r; ++dy)
      for (long dx = -r; dx <= r; ++dx) {
        if (dx * dx + dy * dy > r * r) continue;
        const std::size_t ix = static_cast<std::size_t>(((s / 2 + dx) % s + s) % s);
        const std::size_t iy = static_cast<std::size_t>(((s / 2 + dy) % s + s) % s);
        disk[g.index_of(ix, iy)] = cplx{1.0, 0.0};
        ++count;
      }
    GridFunction disk_hat = forward_transform(disk);
    GridFunction prod(g, Tag::spectral);
    const double norm = 1.0 / (static_cast<double>(count) * g.cell_measure());
    for (std::size_t i = 0; i < prod.size(); ++i)
      prod[i] = mag_hat[i] * disk_hat[i] * norm;
    GridFunction avg = inverse_transform(prod);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(out[i].real(), avg[i].real());
  }
  return out;
}

GridFunction smooth_maximal(const VectorGridFunction& F, const RadialProfile& profile,
                            const ScaleSet& scales) {
  if (scales.empty()) throw std::invalid_argument("smooth_maximal: empty scale set");
  const auto spectra = component_spectra(F);
  GridFunction out(F.grid(), Tag::physical);
  for (double t : scales.scales) {
    GridFunction mag = smoothed_magnitude(spectra, profile, t);
    pointwise_max_into(out, mag);
  }
  return out;
}

GridFunction nontangential_maximal(const VectorGridFunction& F, const RadialProfile& profile,
                                   double aperture, const ScaleSet& scales) {
  if (!(aperture > 0.0)) throw std::invalid_argument("nontangential_maximal: aperture must be > 0");
  if (scales.empty()) throw std::invalid_argument("nontangential_maximal: empty scale set");
  const auto spectra = component_spectra(F);
  const Grid& g = F.grid();
  GridFunction out(g, Tag::physical);
  for (double t : scales.scales) {
    GridFunction mag = smoothed_magnitude(spectra, profile, t);
    const long radius = static_cast<long>(std::floor(aperture * t / g.spacing));
    if (radius == 0) {
      pointwise_max_into(out, mag);
      continue;
    }
    DiskMax dm(mag);
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = std::max(out[i].real(), dm.query(i, radius));
  }
  return out;
}

GridFunction peetre_maximal(const VectorGridFunction& F, const RadialProfile& profile,
                            double b, const ScaleSet& scales) {
  if (!(b > 0.0)) throw std::invalid_argument("peetre_maximal: b must be > 0");
  if (scales.empty()) throw std::invalid_argument("peetre_maximal: empty scale set");
  const auto spectra = component_spectra(F);
  const Grid& g = F.grid();
  const std::size_t s = g.samples;
  GridFunction out(g, Tag::physical);

  for (double t : scales.scales) {
    GridFunction mag = smoothed_magnitude(spectra, profile, t);
    auto weight = [&](double dist) { return std::pow(1.0 + dist / t, -b); };
    if (g.dim == 1) {
      // incremental interval maxima give the exact sup over all y
      std::vector<double> disk(s);
      for (std::size_t i = 0; i < s; ++i) disk[i] = mag[i].real();
      std::vector<double> best = disk;  // radius 0, weight 1
      const long half = static_cast<long>(s) / 2;
      for (long r = 1; r <= half; ++r) {
        const double w = weight(static_cast<double>(r) * g.spacing);
        for (std::size_t i = 0; i < s; ++i) {
          const std::size_t l = (i + s - static_cast<std::size_t>(r)) % s;
          const std::size_t h = (i + static_cast<std::size_t>(r)) % s;
          disk[i] = std::max({disk[i], mag[l].real(), mag[h].real()});
          best[i] = std::max(best[i], w * disk[i]);
        }
      }
      for (std::size_t i = 0; i < s; ++i)
        out[i] = std::max(out[i].real(), best[i]);
    } else {
      const long max_radius =
          static_cast<long>(std::ceil(static_cast<double>(s) * std::sqrt(2.0) / 2.0)) + 1;
      const auto radii = ring_bucket_radii(max_radius);
      DiskMax dm(mag);
      for (std::size_t i = 0; i < out.size(); ++i) {
        double best = mag[i].real();
        long inner = 0;
        for (long r : radii) {
          const double w = weight(static_cast<double>(inner) * g.spacing);
          best = std::max(best, w * dm.query(i, r));
          inner = r;
        }
        out[i] = std::max(out[i].real(), best);
      }
    }
  }
  return out;
}

GridFunction nontangential_with_kernel(const VectorGridFunction& F, const TestFunction& kernel,
                                       const ScaleSet& scales, double aperture) {
  if (scales.empty()) throw std::invalid_argument("nontangential_with_kernel: empty scale set");
  const auto spectra = component_spectra(F);
  const Grid& g = F.grid();
  GridFunction out(g, Tag::physical);
  for (double t : scales.scales) {
    GridFunction kt = kernel.sample_scaled(g, t);
    GridFunction kt_hat = forward_transform(kt);
    GridFunction mag = convolved_magnitude(spectra, kt_hat);
    const long radius = static_cast<long>(std::floor(aperture * t / g.spacing));
    if (radius == 0) {
      pointwise_max_into(out, mag);
    } else {
      DiskMax dm(mag);
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::max(out[i].real(), dm.query(i, radius));
    }
  }
  return out;
}

GridFunction smooth_envelope_with_kernel(const GridFunction& f, const TestFunction& kernel,
                                         const ScaleSet& scales) {
  if (scales.empty()) throw std::invalid_argument("smooth_envelope_with_kernel: empty scale set");
  VectorGridFunction F(std::vector<GridFunction>{f});
  const auto spectra = component_spectra(F);
  GridFunction out(f.grid, Tag::physical);
  for (double t : scales.scales) {
    GridFunction kt = kernel.sample_scaled(f.grid, t);
    GridFunction kt_hat = forward_transform(kt);
    GridFunction mag = convolved_magnitude(spectra, kt_hat);
    pointwise_max_into(out, mag);
  }
  return out;
}

GridFunction grand_maximal(const VectorGridFunction& F,
                           const std::vector<DictionaryEntry>& dictionary,
                           const ScaleSet& scales) {
  if (scales.empty()) throw std::invalid_argument("grand_maximal: empty scale set");
  if (dictionary.empty()) throw std::invalid_argument("grand_maximal: empty dictionary");
  const auto spectra = component_spectra(F);
  const Grid& g = F.grid();
  GridFunction out(g, Tag::physical);
  for (const auto& entry : dictionary) {
    for (double t : scales.scales) {
      GridFunction kt = entry.fn.sample_scaled(g, t);
      GridFunction kt_hat = forward_transform(kt);
      GridFunction mag = convolved_magnitude(spectra, kt_hat);
      const long radius = static_cast<long>(std::floor(t / g.spacing));
      if (radius == 0) {
        pointwise_max_into(out, mag);
      } else {
        DiskMax dm(mag);
        for (std::size_t i = 0; i < out.size(); ++i)
          out[i] = std::max(out[i].real(), dm.query(i, radius));
      }
    }
  }
  return out;
}

}  // namespace lpweak
