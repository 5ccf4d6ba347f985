#include "lpweak/quasinorm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace lpweak {

const char* norm_method_name(NormMethod m) {
  switch (m) {
    case NormMethod::distribution_sup: return "distribution_sup";
    case NormMethod::r_mean_sets: return "r_mean_sets";
    case NormMethod::lp: return "lp";
  }
  return "?";
}

std::string NormReport::csv_row(const std::string& scenario) const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%s,%.17g,%zu,%.17g,%d",
                scenario.c_str(), p, r, norm_method_name(method), value, samples,
                length, scale_m);
  return std::string(buf);
}

namespace {

std::vector<double> descending_magnitudes(const GridFunction& f) {
  std::vector<double> mags(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mags[i] = std::abs(f[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  return mags;
}

NormReport report_stub(const GridFunction& f, double p, NormMethod m) {
  NormReport rep;
  rep.p = p;
  rep.method = m;
  rep.dim = f.grid.dim;
  rep.length = f.grid.length;
  rep.samples = f.grid.samples;
  return rep;
}

}  // namespace

double distribution_function(const GridFunction& f, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("distribution_function: lambda must be >= 0");
  std::size_t count = 0;
  for (const cplx& v : f.values)
    if (std::abs(v) > lambda) ++count;
  return static_cast<double>(count) * f.grid.cell_measure();
}

NormReport weak_lp(const GridFunction& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("weak_lp: p must be positive");
  NormReport rep = report_stub(f, p, NormMethod::distribution_sup);
  const auto mags = descending_magnitudes(f);
  const double hmeas = f.grid.cell_measure();
  double best = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (mags[k] == 0.0) break;
    best = std::max(best,
                    mags[k] * std::pow(static_cast<double>(k + 1) * hmeas, 1.0 / p));
  }
  rep.value = best;
  return rep;
}

NormReport weak_lp_r_mean(const GridFunction& f, double p, double r) {
  if (!(p > 0.0)) throw std::invalid_argument("weak_lp_r_mean: p must be positive");
  if (!(r > 0.0) || r >= p) throw std::invalid_argument("weak_lp_r_mean: need 0 < r < p");
  NormReport rep = report_stub(f, p, NormMethod::r_mean_sets);
  rep.r = r;
  const auto mags = descending_magnitudes(f);
  const double hmeas = f.grid.cell_measure();
  double prefix = 0.0;
  double best = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    if (mags[k] == 0.0 && prefix == 0.0) break;
    prefix += std::pow(mags[k], r) * hmeas;
    const double measure = static_cast<double>(k + 1) * hmeas;
    best = std::max(best,
                    std::pow(measure, -1.0 / r + 1.0 / p) * std::pow(prefix, 1.0 / r));
  }
  rep.value = best;
  return rep;
}

NormReport lp_norm(const GridFunction& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  NormReport rep = report_stub(f, p, NormMethod::lp);
  double acc = 0.0;
  for (const cplx& v : f.values) acc += std::pow(std::abs(v), p);
  rep.value = std::pow(acc * f.grid.cell_measure(), 1.0 / p);
  return rep;
}

NormReport hp_weak(const VectorGridFunction& F, double p, const RadialProfile& phi,
                   const ScaleSet& scales, int scale_m) {
  if (phi(0.0) == 0.0)
    throw std::invalid_argument("hp_weak: kernel must have nonzero integral");
  GridFunction m = smooth_maximal(F, phi, scales);
  NormReport rep = weak_lp(m, p);
  rep.scale_m = scale_m;
  return rep;
}

}  // namespace lpweak
