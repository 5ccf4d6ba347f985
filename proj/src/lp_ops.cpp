#include "lpweak/lp_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace lpweak {

ScaleRange ScaleRange::full(const Grid& grid, const LpBump& bump) {
  const auto [lo, hi] = bump.active_band(grid);
  return ScaleRange{lo, hi, 1, 0};
}

ScaleRange ScaleRange::with_residue(unsigned q, unsigned r) const {
  if (q == 0 || r >= q) throw std::invalid_argument("with_residue: need 0 <= r < q");
  ScaleRange out = *this;
  out.stride = q;
  out.residue = r;
  return out;
}

bool ScaleRange::contains(int j) const {
  if (j < j_min || j > j_max) return false;
  const int q = static_cast<int>(stride);
  const int m = ((j % q) + q) % q;
  return m == static_cast<int>(residue);
}

std::vector<int> ScaleRange::indices() const {
  if (j_min > j_max) throw std::invalid_argument("ScaleRange: j_min > j_max");
  std::vector<int> out;
  for (int j = j_min; j <= j_max; ++j)
    if (contains(j)) out.push_back(j);
  return out;
}

BandResult band_project(const GridFunction& f, int j, const LpBump& bump) {
  if (f.tag != Tag::physical)
    throw std::invalid_argument("band_project: expected physical input");
  const auto [lo, hi] = bump.active_band(f.grid);
  if (j < lo || j > hi) {
    return BandResult{GridFunction(f.grid, Tag::physical), false};
  }
  GridFunction out =
      filter_radial(f, [&bump, j](double r) { return bump.fourier(std::ldexp(r, -j)); });
  return BandResult{std::move(out), true};
}

GridFunction band_sum(const GridFunction& f, const LpBump& bump, const ScaleRange& range) {
  const auto js = range.indices();
  return filter_radial(f, [&bump, &js](double r) {
    double acc = 0.0;
    for (int j : js) acc += bump.fourier(std::ldexp(r, -j));
    return acc;
  });
}

namespace {

GridFunction square_accumulate(const GridFunction& f,
                               const std::function<double(double, int)>& scaled_profile,
                               const ScaleRange& range) {
  if (f.tag != Tag::physical)
    throw std::invalid_argument("square_function: expected physical input");
  GridFunction fh = forward_transform(f);
  GridFunction acc(f.grid, Tag::physical);
  for (int j : range.indices()) {
    GridFunction gh(f.grid, Tag::spectral);
    for (std::size_t i = 0; i < gh.size(); ++i)
      gh[i] = fh[i] * scaled_profile(f.grid.freq_abs(i), j);
    GridFunction g = inverse_transform(gh);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::norm(g[i]);
  }
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::sqrt(acc[i].real());
  return acc;
}

}  // namespace

GridFunction square_function(const GridFunction& f, const LpBump& bump,
                             const ScaleRange& range) {
  return square_accumulate(
      f, [&bump](double r, int j) { return bump.fourier(std::ldexp(r, -j)); }, range);
}

GridFunction square_function_profile(const GridFunction& f, const RadialProfile& profile,
                                     const ScaleRange& range) {
  return square_accumulate(
      f, [&profile](double r, int j) { return profile(std::ldexp(r, -j)); }, range);
}

GridFunction kernel_family_apply(const VectorGridFunction& F, const DerivedKernels& kernels,
                                 const ScaleRange& range) {
  const auto js = range.indices();
  if (js.size() != F.count())
    throw std::invalid_argument("kernel_family_apply: component/scale count mismatch");
  GridFunction acc(F.grid(), Tag::spectral);
  for (std::size_t k = 0; k < js.size(); ++k) {
    GridFunction fh = forward_transform(F.components[k]);
    const int j = js[k];
    for (std::size_t i = 0; i < fh.size(); ++i)
      acc[i] += fh[i] * kernels.envelope(std::ldexp(F.grid().freq_abs(i), -j));
  }
  return inverse_transform(acc);
}

}  // namespace lpweak
