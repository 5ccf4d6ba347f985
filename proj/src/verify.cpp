#include "lpweak/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "lpweak/bumps.hpp"
#include "lpweak/families.hpp"
#include "lpweak/lp_ops.hpp"
#include "lpweak/maximal.hpp"
#include "lpweak/quasinorm.hpp"
#include "lpweak/whitney_cz.hpp"

namespace lpweak {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const std::size_t i = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
  return v[i];
}

// radial annulus bump supported in 1/2 < |x| < 1, positive integral
double annulus_value(double r) {
  r = std::abs(r);
  if (r <= 0.5 || r >= 1.0) return 0.0;
  return std::exp(-1.0 / ((r - 0.5) * (1.0 - r)));
}

GridFunction sample_annulus(const Grid& g, double t) {
  GridFunction out(g, Tag::physical);
  const double tn = g.dim == 1 ? t : t * t;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double r;
    if (g.dim == 1) {
      r = std::abs(g.coord(i)) / t;
    } else {
      r = std::hypot(g.coord(g.axis_x(i)), g.coord(g.axis_y(i))) / t;
    }
    out[i] = annulus_value(r) / tn;
  }
  return out;
}

// least-squares slope of log(val) against log(dist)
double loglog_slope(const std::vector<double>& dist, const std::vector<double>& val) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double x = std::log(dist[i]);
    const double y = std::log(val[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

double ScenarioParams::get(const std::string& key, double fallback) const {
  auto it = numbers.find(key);
  return it == numbers.end() ? fallback : it->second;
}

Grid ScenarioParams::grid(std::size_t default_samples, double default_length,
                          int default_dim) const {
  const auto s = static_cast<std::size_t>(get("samples", static_cast<double>(default_samples)));
  return make_grid(static_cast<int>(get("dim", default_dim)), get("length", default_length), s);
}

void VerifyReport::require(bool ok, const std::string& what) {
  if (!ok) {
    pass = false;
    failures.push_back(what);
  }
}

std::string VerifyReport::csv_body() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    out += header[i];
    out += (i + 1 < header.size()) ? ',' : '\n';
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += fmt(row[i]);
      out += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  return out;
}

void VerifyReport::write_csv(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  os << csv_body();
  if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

// ---------------------------------------------------------------------------

VerifyReport check_partition_of_unity(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "partition_of_unity";
  const Grid g = p.grid(4096, 16.0);
  const LpBump bump = make_lp_bump(p.sharpness);
  const auto range = ScaleRange::full(g, bump);
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"length", g.length},
                {"dim", g.dim},
                {"sharpness", p.sharpness}};
  rep.header = {"freq", "partition_sum"};

  double max_err = 0.0;
  double min_value = 0.0;
  int support_violations = 0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const double r = g.freq_abs(i);
    if (r <= 0.0 || r > g.nyquist()) continue;
    ++checked;
    double sum = 0.0;
    for (int j = range.j_min; j <= range.j_max; ++j) {
      const double v = bump.fourier(std::ldexp(r, -j));
      min_value = std::min(min_value, v);
      const double arg = std::ldexp(r, -j);
      if ((arg < LpBump::support_lo || arg > LpBump::support_hi) && v != 0.0)
        ++support_violations;
      sum += v;
    }
    max_err = std::max(max_err, std::abs(sum - 1.0));
    if (rep.rows.size() < 64) rep.rows.push_back({r, sum});
  }
  rep.constants["max_partition_error"] = max_err;
  rep.constants["min_bump_value"] = min_value;
  rep.constants["support_violations"] = support_violations;
  rep.constants["frequencies_checked"] = static_cast<double>(checked);
  rep.require(max_err <= 1e-10, "partition sum error " + fmt(max_err) + " > 1e-10");
  rep.require(min_value >= 0.0, "negative bump value " + fmt(min_value));
  rep.require(support_violations == 0, "bump support violations");
  return rep;
}

VerifyReport check_reconstruction(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "reconstruction";
  const Grid g = p.grid(4096, 16.0);
  const LpBump bump = make_lp_bump(p.sharpness);
  const auto range = ScaleRange::full(g, bump);
  const auto count = static_cast<std::size_t>(p.get("count", 20));
  const double tol = p.get("tolerance", 1e-8);
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"tolerance", tol}};
  rep.header = {"instance", "sup_error"};

  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    GridFunction f = random_band_limited(g, p.seed, i, true);
    GridFunction s = band_sum(f, bump, range);
    double err = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) err = std::max(err, std::abs(s[k] - f[k]));
    worst = std::max(worst, err);
    rep.rows.push_back({static_cast<double>(i), err});
  }
  rep.constants["max_sup_error"] = worst;
  rep.require(worst <= tol, "reconstruction error " + fmt(worst) + " > " + fmt(tol));
  return rep;
}

VerifyReport check_maximal_chain(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "maximal_chain";
  const Grid g = p.grid(1024, 16.0);
  const LpBump bump = make_lp_bump(p.sharpness);
  const DerivedKernels kernels = derive_kernels(bump, 0, 1);
  const auto prof = kernels.low_pass_profile();
  const ScaleSet scales = ScaleSet::geometric(g, p.scale_m);
  const auto count = static_cast<std::size_t>(p.get("count", 20));
  const auto comps = static_cast<std::size_t>(p.get("components", 3));
  const double pe = p.get("p", 1.0);
  const double b = static_cast<double>(g.dim) / pe + 1.0;
  const std::vector<double> apertures = {0.5, 1.0, 2.0};
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"p", pe},
                {"b", b}};
  rep.header = {"instance", "aperture", "violations_smooth_vs_cone",
                "violations_cone_vs_weighted"};

  const auto dict = build_dictionary(g.dim, static_cast<int>(std::floor(b)) + 1,
                                     p.dict_size, p.seed);
  double ratio_cone_max = 0.0, ratio_weighted_max = 0.0, ratio_grand_max = 0.0;
  double ratio_cone_min = 1e300, ratio_weighted_min = 1e300, ratio_grand_min = 1e300;
  std::size_t total_violations = 0;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<GridFunction> parts;
    for (std::size_t k = 0; k < comps; ++k) {
      if (k % 3 == 2 && g.dim == 1 && i % 2 == 0)
        parts.push_back(dipole(g));
      else if (k % 3 == 1)
        parts.push_back(random_indicator(g, p.seed, i * 17 + k, 3));
      else
        parts.push_back(random_band_limited(g, p.seed, i * 17 + k, false));
    }
    VectorGridFunction F(std::move(parts));
    GridFunction m0 = smooth_maximal(F, prof, scales);
    GridFunction mp = peetre_maximal(F, prof, b, scales);
    for (double a : apertures) {
      GridFunction mc = nontangential_maximal(F, prof, a, scales);
      const double factor = std::pow(1.0 + a, b);
      std::size_t v1 = 0, v2 = 0;
      for (std::size_t k = 0; k < m0.size(); ++k) {
        if (m0[k].real() > mc[k].real()) ++v1;
        // allow 8 ulps for the rounding of the weight product
        if (mc[k].real() > factor * mp[k].real() * (1.0 + 1.8e-15)) ++v2;
      }
      total_violations += v1 + v2;
      rep.rows.push_back({static_cast<double>(i), a, static_cast<double>(v1),
                          static_cast<double>(v2)});
      if (a == 1.0) {
        // empirical two-sided quasinorm comparison across the maximal family
        const double wm = weak_lp(m0, pe).value;
        if (wm > 1e-12) {
          const double rc = weak_lp(mc, pe).value / wm;
          const double rw = weak_lp(mp, pe).value / wm;
          GridFunction mg = grand_maximal(F, dict, scales);
          const double rg = weak_lp(mg, pe).value / wm;
          ratio_cone_max = std::max(ratio_cone_max, rc);
          ratio_cone_min = std::min(ratio_cone_min, rc);
          ratio_weighted_max = std::max(ratio_weighted_max, rw);
          ratio_weighted_min = std::min(ratio_weighted_min, rw);
          ratio_grand_max = std::max(ratio_grand_max, rg);
          ratio_grand_min = std::min(ratio_grand_min, rg);
        }
      }
    }
  }
  rep.constants["total_violations"] = static_cast<double>(total_violations);
  rep.constants["cone_over_smooth_max"] = ratio_cone_max;
  rep.constants["cone_over_smooth_min"] = ratio_cone_min;
  rep.constants["weighted_over_smooth_max"] = ratio_weighted_max;
  rep.constants["weighted_over_smooth_min"] = ratio_weighted_min;
  rep.constants["grand_over_smooth_max"] = ratio_grand_max;
  rep.constants["grand_over_smooth_min"] = ratio_grand_min;
  rep.require(total_violations == 0, "pointwise chain violations: " + fmt(total_violations));
  rep.require(std::isfinite(ratio_weighted_max) && ratio_grand_min > 0.0,
              "maximal comparison ratios degenerate");
  return rep;
}

VerifyReport check_weak_norms(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "weak_norm_exactness";
  const Grid g = p.grid(16384, 64.0);
  const auto count = static_cast<std::size_t>(p.get("count", 50));
  const double tol_witness = p.get("witness_tolerance", 0.02);
  const double pr = p.get("p", 1.5);
  const double rr = p.get("r", 1.0);
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"length", g.length},
                {"p", pr},
                {"r", rr},
                {"count", static_cast<double>(count)}};
  rep.header = {"instance", "weak", "r_mean", "upper_bound"};

  // indicators: both norms equal |E|^{1/p} exactly
  double worst_indicator = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    GridFunction chi = random_indicator(g, p.seed, 900 + i, 4);
    const double measure = distribution_function(chi, 0.5);
    if (measure == 0.0) continue;
    const double expect = std::pow(measure, 1.0 / pr);
    const double w = weak_lp(chi, pr).value;
    const double rm = weak_lp_r_mean(chi, pr, rr).value;
    worst_indicator = std::max({worst_indicator, std::abs(w - expect) / expect,
                                std::abs(rm - expect) / expect});
  }
  rep.constants["indicator_rel_error"] = worst_indicator;
  rep.require(worst_indicator <= 1e-12, "indicator weak norm not exact");

  // the unit weak-L1 witness and the capped power spike
  if (g.dim == 1) {
    const double w1 = weak_lp(reciprocal_tail(g), 1.0).value;
    rep.constants["reciprocal_witness"] = w1;
    rep.require(std::abs(w1 - 1.0) <= tol_witness,
                "reciprocal witness " + fmt(w1) + " deviates from 1");
    for (double ps : {0.7, 1.0}) {
      const double ws = weak_lp(power_spike(g, ps, 64.0), ps).value;
      const double expect = std::pow(2.0, 1.0 / ps);
      rep.constants["spike_p" + fmt(ps)] = ws;
      rep.require(std::abs(ws - expect) <= tol_witness * expect,
                  "power spike norm at p=" + fmt(ps));
    }
  }

  // two-sided r-mean comparison on random data
  const double upper = std::pow(pr / (pr - rr), 1.0 / rr);
  bool ok_band = true;
  for (std::size_t i = 0; i < count; ++i) {
    GridFunction f = random_band_limited(g, p.seed, 1000 + i, false);
    const double w = weak_lp(f, pr).value;
    const double rm = weak_lp_r_mean(f, pr, rr).value;
    rep.rows.push_back({static_cast<double>(i), w, rm, upper * w});
    if (!(w <= rm * (1.0 + 1e-12) && rm <= upper * w * (1.0 + 1e-12))) ok_band = false;
  }
  rep.constants["r_mean_upper_factor"] = upper;
  rep.require(ok_band, "r-mean norm outside [1, (p/(p-r))^{1/r}] band");
  return rep;
}

VerifyReport check_whitney_cz(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "whitney_cz_tier1";
  const Grid g = p.grid(1024, 16.0);
  const auto count = static_cast<std::size_t>(p.get("count", 10));
  const int N = static_cast<int>(p.get("degree", 2));
  const auto comps = static_cast<std::size_t>(p.get("components", 2));
  const int overlap_bound = g.dim == 1 ? 12 : 144;
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"degree", N}};
  rep.header = {"instance", "cubes", "max_overlap", "partition_error",
                "reconstruction_error", "max_moment_residual"};

  const ScaleSet scales = ScaleSet::geometric(g, p.scale_m);
  const auto dict = build_dictionary(g.dim, N, 8, p.seed);

  for (std::size_t inst = 0; inst < count; ++inst) {
    const auto mask = random_open_mask(g, p.seed, inst);
    const auto cubes = whitney_decompose(g, mask);
    const auto dt = chebyshev_distance_to_complement(g, mask);

    // tiling: disjointness and exact coverage of the mask
    std::vector<int> covered(g.cell_count(), 0);
    for (const auto& cube : cubes) {
      const long b = cube.side_cells(g);
      const long x0 = cube.first_cell(g, 0);
      const long y0 = g.dim == 2 ? cube.first_cell(g, 1) : 0;
      for (long dy = 0; dy < (g.dim == 2 ? b : 1); ++dy)
        for (long dx = 0; dx < b; ++dx)
          covered[g.index_of(static_cast<std::size_t>(x0 + dx),
                             static_cast<std::size_t>(y0 + dy))] += 1;
    }
    bool tiling_ok = true;
    for (std::size_t i = 0; i < covered.size(); ++i)
      if (covered[i] != (mask[i] ? 1 : 0)) tiling_ok = false;
    rep.require(tiling_ok, "whitney tiling mismatch at instance " + fmt(inst));

    bool geometry_ok = true;
    for (const auto& cube : cubes) {
      const double diam = cube_diameter(g, cube);
      const double dist = cube_distance_to_complement(g, dt, cube);
      if (!(diam < dist && dist <= 4.0 * diam)) geometry_ok = false;
    }
    rep.require(geometry_ok, "whitney geometry violated at instance " + fmt(inst));

    const auto overlaps = dilated_overlap_counts(g, cubes, 9.0 / 8.0);
    const int max_overlap = *std::max_element(overlaps.begin(), overlaps.end());
    rep.require(max_overlap <= overlap_bound, "overlap bound exceeded: " + fmt(max_overlap));

    const auto phis = partition_of_unity(g, cubes, mask, 9.0 / 8.0, 17.0 / 16.0);
    std::vector<double> total(g.cell_count(), 0.0);
    for (const auto& pb : phis)
      for (std::size_t k = 0; k < pb.cells.size(); ++k) total[pb.cells[k]] += pb.values[k];
    double partition_err = 0.0;
    for (std::size_t i = 0; i < total.size(); ++i)
      partition_err = std::max(partition_err, std::abs(total[i] - (mask[i] ? 1.0 : 0.0)));
    rep.require(partition_err <= 1e-10, "partition of unity error " + fmt(partition_err));

    // full decomposition against the dictionary maximal proxy
    VectorGridFunction F = random_band_limited_vector(g, p.seed, 7000 + inst, comps, false);
    GridFunction proxy = grand_maximal(F, dict, scales);
    std::vector<double> pv(proxy.size());
    for (std::size_t i = 0; i < proxy.size(); ++i) pv[i] = proxy[i].real();
    const double alpha = quantile(pv, 0.70);
    CZDecomposition cz = cz_decompose(F, alpha, 1.0, N, proxy);

    VectorGridFunction bad = cz.bad_total();
    double recon = 0.0, fmax = 0.0;
    for (std::size_t k = 0; k < comps; ++k)
      for (std::size_t i = 0; i < F.components[k].size(); ++i) {
        recon = std::max(recon, std::abs(F.components[k][i] - cz.good.components[k][i] -
                                         bad.components[k][i]));
        fmax = std::max(fmax, std::abs(F.components[k][i]));
      }
    rep.require(recon <= 1e-10 * std::max(1.0, fmax), "cz reconstruction error " + fmt(recon));

    // moment cancellation and support containment per cube
    double worst_moment = 0.0;
    bool support_ok = true;
    for (std::size_t j = 0; j < cz.bad.size(); ++j) {
      const auto& bp = cz.bad[j];
      const double side = bp.cube.side(g);
      std::vector<double> center(g.dim);
      for (int a = 0; a < g.dim; ++a) center[a] = bp.cube.center(g, a);
      for (std::size_t c = 0; c < bp.cells.size(); ++c) {
        for (int a = 0; a < g.dim; ++a) {
          const long axis_index = a == 0 ? static_cast<long>(g.axis_x(bp.cells[c]))
                                         : static_cast<long>(g.axis_y(bp.cells[c]));
          double d = g.coord(static_cast<std::size_t>(axis_index)) - center[a];
          while (d > 0.5 * g.length) d -= g.length;
          while (d < -0.5 * g.length) d += g.length;
          if (std::abs(d) > (17.0 / 16.0) * side / 2.0) support_ok = false;
        }
      }
      for (std::size_t k = 0; k < comps; ++k) {
        for (int bx = 0; bx <= N; ++bx)
          for (int by = 0; by <= (g.dim == 2 ? N - bx : 0); ++by) {
            cplx mom{0.0, 0.0};
            double denom = 1e-300;
            for (std::size_t c = 0; c < bp.cells.size(); ++c) {
              const std::size_t cell = bp.cells[c];
              double ux = g.coord(g.axis_x(cell)) - center[0];
              while (ux > 0.5 * g.length) ux -= g.length;
              while (ux < -0.5 * g.length) ux += g.length;
              ux /= side;
              double m = 1.0;
              for (int t = 0; t < bx; ++t) m *= ux;
              if (g.dim == 2) {
                double uy = g.coord(g.axis_y(cell)) - center[1];
                while (uy > 0.5 * g.length) uy -= g.length;
                while (uy < -0.5 * g.length) uy += g.length;
                uy /= side;
                for (int t = 0; t < by; ++t) m *= uy;
              }
              mom += bp.component_values[k][c] * m;
              denom += std::abs(F.components[k][cell]) * std::abs(m) * cz.phis[j].values[c];
            }
            worst_moment = std::max(worst_moment, std::abs(mom) / denom);
          }
      }
    }
    rep.require(worst_moment <= 1e-8, "moment residual " + fmt(worst_moment));
    rep.require(support_ok, "bad part leaks outside the dilated cube");

    rep.rows.push_back({static_cast<double>(inst), static_cast<double>(cubes.size()),
                        static_cast<double>(max_overlap), partition_err, recon, worst_moment});
  }
  return rep;
}

VerifyReport check_cz_quantitative(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "cz_quantitative";
  const Grid g = p.grid(16384, 16.0);
  const int N = static_cast<int>(p.get("degree", 2));
  const double stability = p.get("stability_factor", 3.0);
  const double slope_margin = p.get("slope_margin", 0.5);
  rep.params = {{"samples", static_cast<double>(g.samples)}, {"degree", N}};
  rep.header = {"alpha", "sup_good_over_alpha", "cubes"};

  const ScaleSet scales = ScaleSet::geometric(g, p.scale_m);
  const auto dict = build_dictionary(g.dim, N, 8, p.seed);

  GridFunction spike = embed_point_mass(g, std::vector<double>(g.dim, 0.3), 1.0);
  VectorGridFunction F(std::vector<GridFunction>{spike});
  GridFunction proxy = grand_maximal(F, dict, scales);

  // Heights chosen by target size of the superlevel set, keeping every
  // decomposition between the cell-quantization floor and the torus wrap:
  // two decades of alpha inside the scaling window.
  std::vector<double> sorted_desc(proxy.size());
  for (std::size_t i = 0; i < proxy.size(); ++i) sorted_desc[i] = proxy[i].real();
  std::sort(sorted_desc.begin(), sorted_desc.end(), std::greater<double>());
  const int sweep = static_cast<int>(p.get("sweep", 9));
  const double rank_lo = p.get("rank_lo", 32.0);
  const double rank_hi =
      std::min(p.get("rank_hi", 4096.0), static_cast<double>(g.cell_count()) / 4.0);
  double q_lo = std::numeric_limits<double>::infinity(), q_hi = 0.0;
  double alpha_first = 0.0, alpha_last = 0.0;
  CZDecomposition cz_mid;
  for (int k = 0; k < sweep; ++k) {
    const double frac = static_cast<double>(k) / static_cast<double>(sweep - 1);
    const auto rank = static_cast<std::size_t>(rank_lo * std::pow(rank_hi / rank_lo, frac));
    const double alpha = sorted_desc[rank];
    if (k == 0) alpha_first = alpha;
    alpha_last = alpha;
    CZDecomposition cz = cz_decompose(F, alpha, 1.0, N, proxy);
    if (cz.cubes.empty()) continue;
    GridFunction gm = cz.good.l2_magnitude();
    double sup_good = 0.0;
    for (std::size_t i = 0; i < gm.size(); ++i)
      if (cz.mask[i]) sup_good = std::max(sup_good, gm[i].real());
    const double ratio = sup_good / alpha;
    q_lo = std::min(q_lo, ratio);
    q_hi = std::max(q_hi, ratio);
    rep.rows.push_back({alpha, ratio, static_cast<double>(cz.cubes.size())});
    if (k == sweep / 2) cz_mid = std::move(cz);
  }
  rep.constants["good_over_alpha_min"] = q_lo;
  rep.constants["good_over_alpha_max"] = q_hi;
  rep.constants["alpha_span"] = alpha_first / alpha_last;
  rep.require(alpha_first / alpha_last >= p.get("alpha_span_min", 100.0),
              "alpha sweep spans less than the required decades: " +
                  fmt(alpha_first / alpha_last));
  rep.require(q_hi > 0.0 && q_hi / q_lo <= stability,
              "good-part bound unstable: ratio " + fmt(q_hi / q_lo));

  // bad-part envelope decay for the cube containing the spike
  std::size_t spike_cell = 0;
  for (std::size_t i = 0; i < spike.size(); ++i)
    if (std::abs(spike[i]) > 0.0) spike_cell = i;
  std::size_t jstar = cz_mid.bad.size();
  for (std::size_t j = 0; j < cz_mid.bad.size(); ++j)
    for (std::size_t c : cz_mid.bad[j].cells)
      if (c == spike_cell) jstar = j;
  rep.require(jstar < cz_mid.bad.size(), "spike cube not found in mid-sweep decomposition");
  if (jstar < cz_mid.bad.size()) {
    VectorGridFunction bj = cz_mid.bad_of_cube(jstar);
    GridFunction envelope(g, Tag::physical);
    GridFunction bh = forward_transform(bj.components[0]);
    for (double t : scales.scales) {
      GridFunction kt = sample_annulus(g, t);
      GridFunction kh = forward_transform(kt);
      GridFunction prod(g, Tag::spectral);
      for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = bh[i] * kh[i];
      GridFunction conv = inverse_transform(prod);
      for (std::size_t i = 0; i < envelope.size(); ++i)
        envelope[i] = std::max(envelope[i].real(), std::abs(conv[i]));
    }
    const auto& cube = cz_mid.bad[jstar].cube;
    const double side = cube.side(g);
    std::vector<double> center(g.dim);
    for (int a = 0; a < g.dim; ++a) center[a] = cube.center(g, a);
    const double env_peak = envelope.max_abs();
    std::vector<double> dist, val;
    for (std::size_t i = 0; i < envelope.size(); ++i) {
      double d;
      if (g.dim == 1) {
        d = std::abs(g.coord(i) - center[0]);
        d = std::min(d, g.length - d);
      } else {
        d = g.point_distance(i, g.snap(center));
      }
      if (d < 1.5 * side || d > g.length / 4.0) continue;
      if (envelope[i].real() < 1e-13 * env_peak) continue;
      dist.push_back(d);
      val.push_back(envelope[i].real());
    }
    const double target = -(static_cast<double>(N + g.dim + 1)) + slope_margin;
    double slope = 0.0;
    if (dist.size() >= 8) {
      slope = loglog_slope(dist, val);
      rep.constants["bad_decay_slope"] = slope;
      rep.require(slope <= target,
                  "bad-part decay slope " + fmt(slope) + " above " + fmt(target));
    } else {
      rep.require(false, "not enough points for decay regression");
    }
  }
  return rep;
}

VerifyReport check_sq_equivalence(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "sq_equivalence";
  const Grid g = p.grid(4096, 16.0);
  const auto count = static_cast<std::size_t>(p.get("count", 50));
  const double threshold = p.get("threshold", 50.0);
  const double refine_change = p.get("refine_change", 0.10);
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"threshold", threshold}};
  rep.header = {"p", "instance", "sq_weak", "hp_weak_m4", "hp_weak_m8", "ratio"};

  const LpBump bump = make_lp_bump(p.sharpness);
  const auto kernels = derive_kernels(bump, 0, 1);
  const auto prof = kernels.low_pass_profile();
  const auto range = ScaleRange::full(g, bump);
  const ScaleSet sc4 = ScaleSet::geometric(g, p.scale_m);
  const ScaleSet sc8 = ScaleSet::geometric(g, 2 * p.scale_m);
  const std::vector<double> ps = {p.get("p_low", 0.7), p.get("p_mid", 1.0),
                                  p.get("p_high", 1.5)};

  std::map<double, double> c_high4, c_low4, c_high8, c_low8;
  for (double pe : ps) {
    c_high4[pe] = 0.0;
    c_low4[pe] = std::numeric_limits<double>::infinity();
    c_high8[pe] = 0.0;
    c_low8[pe] = std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 0; i < count; ++i) {
    GridFunction f = random_band_limited(g, p.seed, 4000 + i, true);
    GridFunction sf = square_function(f, bump, range);
    VectorGridFunction F(std::vector<GridFunction>{f});
    GridFunction m4 = smooth_maximal(F, prof, sc4);
    GridFunction m8 = smooth_maximal(F, prof, sc8);
    for (double pe : ps) {
      const double wsq = weak_lp(sf, pe).value;
      const double h4 = weak_lp(m4, pe).value;
      const double h8 = weak_lp(m8, pe).value;
      if (h4 < 1e-12 || wsq < 1e-12) continue;
      const double ratio = wsq / h4;
      c_high4[pe] = std::max(c_high4[pe], ratio);
      c_low4[pe] = std::min(c_low4[pe], ratio);
      const double ratio8 = wsq / h8;
      c_high8[pe] = std::max(c_high8[pe], ratio8);
      c_low8[pe] = std::min(c_low8[pe], ratio8);
      rep.rows.push_back({pe, static_cast<double>(i), wsq, h4, h8, ratio});
    }
  }
  for (double pe : ps) {
    const double band4 = std::max(c_high4[pe], 1.0 / c_low4[pe]);
    const double band8 = std::max(c_high8[pe], 1.0 / c_low8[pe]);
    rep.constants["c_high_p" + fmt(pe)] = c_high4[pe];
    rep.constants["c_low_p" + fmt(pe)] = c_low4[pe];
    rep.constants["band_m4_p" + fmt(pe)] = band4;
    rep.constants["band_m8_p" + fmt(pe)] = band8;
    rep.require(band4 <= threshold,
                "two-sided band " + fmt(band4) + " over threshold at p=" + fmt(pe));
    rep.require(band8 <= band4 * (1.0 + refine_change),
                "band grows more than " + fmt(refine_change) + " under refinement at p=" + fmt(pe));
  }
  return rep;
}

VerifyReport check_fs_inequality(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "vector_maximal";
  const Grid g = p.grid(2048, 16.0);
  const auto count = static_cast<std::size_t>(p.get("count", 30));
  const auto comps = static_cast<std::size_t>(p.get("components", 8));
  const double pe = p.get("p", 2.0);
  const double qe = p.get("q", 2.0);
  const double p1 = p.get("p1", 1.5);
  const double p2 = p.get("p2", 3.0);
  const double threshold = p.get("threshold", 20.0);
  if (!(pe > 1.0 && qe > 1.0))
    throw std::invalid_argument("vector_maximal: need p, q > 1");
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"p", pe},
                {"q", qe},
                {"threshold", threshold}};
  rep.header = {"instance", "lhs_weak", "rhs_weak", "ratio"};

  double max_ratio = 0.0;
  double worst_layercake = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    VectorGridFunction F = random_band_limited_vector(g, p.seed, 5000 + i, comps, false);
    std::vector<GridFunction> mcomps;
    for (const auto& c : F.components) mcomps.push_back(hardy_littlewood_maximal(c));
    VectorGridFunction M(std::move(mcomps));
    GridFunction lhs = M.lq_magnitude(qe);
    GridFunction rhs = F.lq_magnitude(qe);
    const double wl = weak_lp(lhs, pe).value;
    const double wr = weak_lp(rhs, pe).value;
    if (wr < 1e-12) continue;
    const double ratio = wl / wr;
    max_ratio = std::max(max_ratio, ratio);
    rep.rows.push_back({static_cast<double>(i), wl, wr, ratio});

    // re-enact the proof's split: layer-cake bounds at three heights
    if (i < 5) {
      std::vector<double> mags(rhs.size());
      for (std::size_t k = 0; k < rhs.size(); ++k) mags[k] = rhs[k].real();
      for (double qq : {0.25, 0.5, 0.75}) {
        const double lambda = quantile(mags, qq) + 1e-9;
        const double alpha = split_height(lambda, 1.0, 1.0, p1, p2);
        auto [above, below] = split_at_height(F, alpha);
        const double wa = lp_norm(above.lq_magnitude(qe), p1).value;
        const double wb = lp_norm(below.lq_magnitude(qe), p2).value;
        const double wpw = std::pow(weak_lp(rhs, pe).value, pe);
        const double bound1 = pe / (pe - p1) * std::pow(alpha, p1 - pe) * wpw;
        const double d_alpha = distribution_function(rhs, alpha);
        const double bound2 = p2 / (p2 - pe) * std::pow(alpha, p2 - pe) * wpw -
                              d_alpha * std::pow(alpha, p2);
        const double r1 = std::pow(wa, p1) / std::max(bound1, 1e-300);
        const double r2 = std::pow(wb, p2) / std::max(bound2, 1e-300);
        worst_layercake = std::max({worst_layercake, r1, r2});
      }
    }
  }
  rep.constants["max_ratio"] = max_ratio;
  rep.constants["worst_layercake_ratio"] = worst_layercake;
  rep.require(max_ratio <= threshold, "vector maximal ratio " + fmt(max_ratio));
  rep.require(worst_layercake <= 1.0 + 1e-9,
              "layer-cake inequality violated: " + fmt(worst_layercake));
  return rep;
}

VerifyReport check_nondensity(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "nondensity";
  const Grid g = p.grid(16384, 64.0);
  const double bound = p.get("distance_bound", 0.04);
  const double profile_band = p.get("profile_band", 10.0);
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"length", g.length},
                {"distance_bound", bound}};
  rep.header = {"probe", "mollify_scale", "distance"};

  const LpBump bump = make_lp_bump(p.sharpness);
  const auto kernels = derive_kernels(bump, 0, 1);
  const auto prof = kernels.low_pass_profile();
  const ScaleSet scales = ScaleSet::geometric(g, p.scale_m);

  GridFunction f = dipole(g);
  auto distance_to = [&](const GridFunction& probe) {
    GridFunction diff(g, Tag::physical);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f[i] - probe[i];
    VectorGridFunction D(std::vector<GridFunction>{std::move(diff)});
    return weak_lp(smooth_maximal(D, prof, scales), 1.0).value;
  };

  double infimum = std::numeric_limits<double>::infinity();
  int probe_id = 0;

  // empty probe
  {
    const double d = distance_to(GridFunction(g, Tag::physical));
    infimum = std::min(infimum, d);
    rep.rows.push_back({static_cast<double>(probe_id++), 0.0, d});
  }
  // Gaussian mollifications at dyadic scales, finest last. The band-limited
  // low-pass kernel becomes the identity below the grid resolution, so the
  // probes use a mollifier that keeps attenuating at every scale. The
  // monotone-trend assertion covers the scales the maximal sweep can resolve
  // (t above the 4h floor); distances at and below the floor are reported but
  // sit outside the sweep's reach and shrink with it.
  std::vector<double> moll_distances;
  for (int k = 2; k <= 7; ++k) {
    const double t = std::exp2(-k);
    GridFunction probe =
        filter_radial(f, [t](double r) { return std::exp(-M_PI * t * t * r * r); });
    const double d = distance_to(probe);
    infimum = std::min(infimum, d);
    if (t > 4.0 * g.spacing * (1.0 + 1e-12)) moll_distances.push_back(d);
    rep.rows.push_back({static_cast<double>(probe_id++), t, d});
  }
  // generic gaussians
  for (double width : {0.5, 1.0, 2.0}) {
    TestFunction tf;
    tf.factors.resize(g.dim);
    for (auto& fac : tf.factors) fac.width = width;
    GridFunction probe = tf.sample_scaled(g, 1.0);
    const double d = distance_to(probe);
    infimum = std::min(infimum, d);
    rep.rows.push_back({static_cast<double>(probe_id++), 0.0, d});
  }

  rep.constants["distance_infimum"] = infimum;
  rep.require(infimum >= bound, "distance infimum " + fmt(infimum) + " < " + fmt(bound));

  bool monotone = true;
  for (std::size_t k = 1; k < moll_distances.size(); ++k)
    if (moll_distances[k] < moll_distances[k - 1] * (1.0 - 1e-9)) monotone = false;
  rep.constants["mollify_trend_ok"] = monotone ? 1.0 : 0.0;
  rep.require(monotone, "distance not non-decreasing under mollification refinement");

  // shape of the maximal profile away from the two spikes
  VectorGridFunction Df(std::vector<GridFunction>{f});
  GridFunction fplus = smooth_maximal(Df, prof, scales);
  double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
  for (std::size_t i = 0; i < fplus.size(); ++i) {
    const double x = g.coord(i);
    const bool window = (x >= 0.3 && x <= 0.7) || (x >= 1.4 && x <= 3.0);
    if (!window) continue;
    const double ref = std::abs(x) / ((x + 1.0) * (x + 1.0) * std::abs(1.0 - x));
    const double ratio = fplus[i].real() / ref;
    ratio_min = std::min(ratio_min, ratio);
    ratio_max = std::max(ratio_max, ratio);
  }
  rep.constants["profile_ratio_min"] = ratio_min;
  rep.constants["profile_ratio_max"] = ratio_max;
  rep.require(ratio_min > 0.0 && ratio_max / ratio_min <= profile_band,
              "maximal profile shape band " + fmt(ratio_max / ratio_min));

  // refinement guard: over the probes both resolutions can resolve, the
  // infimum is not a discretization artifact
  if (g.samples >= 16) {
    const Grid gh = make_grid(g.dim, g.length, g.samples / 2);
    const ScaleSet scales_h = ScaleSet::geometric(gh, p.scale_m);
    const double common_floor = 4.0 * gh.spacing * (1.0 + 1e-12);
    GridFunction fh = dipole(gh);
    auto distance_h = [&](const GridFunction& probe) {
      GridFunction diff(gh, Tag::physical);
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fh[i] - probe[i];
      VectorGridFunction D(std::vector<GridFunction>{std::move(diff)});
      return weak_lp(smooth_maximal(D, prof, scales_h), 1.0).value;
    };
    double inf_h = distance_h(GridFunction(gh, Tag::physical));
    double inf_full = distance_to(GridFunction(g, Tag::physical));
    for (int k = 2; k <= 7; ++k) {
      const double t = std::exp2(-k);
      if (t <= common_floor) continue;
      auto moll = [t](double r) { return std::exp(-M_PI * t * t * r * r); };
      inf_h = std::min(inf_h, distance_h(filter_radial(fh, moll)));
      inf_full = std::min(inf_full, distance_to(filter_radial(f, moll)));
    }
    rep.constants["infimum_resolvable"] = inf_full;
    rep.constants["infimum_resolvable_half"] = inf_h;
    rep.require(std::abs(inf_h - inf_full) <= 0.10 * inf_full,
                "resolvable-probe infimum moves more than 10% under resolution halving");
  }
  return rep;
}

VerifyReport check_lacunary(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "lacunary";
  const Grid g = p.grid(4096, 16.0);
  const auto count = static_cast<std::size_t>(p.get("count", 50));
  const auto q = static_cast<unsigned>(p.get("q", 2));
  const double pe = p.get("p", 1.0);
  const double threshold = p.get("threshold", 100.0);
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"q", static_cast<double>(q)},
                {"p", pe}};
  rep.header = {"instance", "consistency_error", "ratio_r0"};

  const LpBump bump = make_lp_bump(p.sharpness);
  const auto range = ScaleRange::full(g, bump);
  double worst_consistency = 0.0, max_ratio = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    GridFunction f = random_band_limited(g, p.seed, 6000 + i, true);
    GridFunction s_full = square_function(f, bump, range);
    std::vector<GridFunction> s_res;
    for (unsigned r = 0; r < q; ++r)
      s_res.push_back(square_function(f, bump, range.with_residue(q, r)));
    double cerr = 0.0, smax = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      double acc = 0.0;
      for (const auto& sr : s_res) acc += sr[k].real() * sr[k].real();
      const double full2 = s_full[k].real() * s_full[k].real();
      cerr = std::max(cerr, std::abs(acc - full2));
      smax = std::max(smax, full2);
    }
    const double rel = smax > 0.0 ? cerr / smax : 0.0;
    worst_consistency = std::max(worst_consistency, rel);

    const double wf = weak_lp(f, pe).value;
    const double ws = weak_lp(s_res[0], pe).value;
    double ratio = 0.0;
    if (ws > 1e-12) {
      ratio = wf / ws;
      max_ratio = std::max(max_ratio, ratio);
    }
    rep.rows.push_back({static_cast<double>(i), rel, ratio});
  }
  rep.constants["max_consistency_error"] = worst_consistency;
  rep.constants["max_lower_ratio"] = max_ratio;
  rep.require(worst_consistency <= 1e-12,
              "residue-class consistency error " + fmt(worst_consistency));
  rep.require(max_ratio > 0.0 && max_ratio <= threshold,
              "lacunary lower ratio " + fmt(max_ratio));
  return rep;
}

VerifyReport check_decay_trend(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "decay_trend";
  const Grid g = p.grid(2048, 32.0);
  const double pe = p.get("p", 1.0);
  const double p1 = pe / 2.0;
  const double p2 = 2.0 * pe;
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"length", g.length},
                {"p", pe}};
  rep.header = {"witness", "sweep_value", "ratio"};
  if (g.dim != 1) throw std::invalid_argument("decay_trend: one-dimensional witnesses");

  const double h = g.spacing;
  auto ratio_at = [&](const GridFunction& f, double exponent, double radius) {
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double x = std::abs(g.coord(i));
      if (x > radius || x == 0.0) continue;
      if (std::abs(f[i]) >= std::pow(x, -exponent)) ++cnt;
    }
    return static_cast<double>(cnt) * h / radius;
  };

  // annulus witness in L^p: exceptional set is exactly [1, 1.5]
  GridFunction g_lp(g, Tag::physical);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const double x = std::abs(g.coord(i));
    if (x >= 1.0 && x <= 1.5)
      g_lp[i] = 1.0001 * std::pow(x, -1.0 / pe);
    else if (x > 1.5)
      g_lp[i] = std::pow(x, -2.0 / pe);
  }
  // weak-L^p witness with a genuine slow tail
  GridFunction g_wlp(g, Tag::physical);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const double x = std::abs(g.coord(i));
    if (x >= 1.0 && x <= 1.5)
      g_wlp[i] = 1.0001 * std::pow(x, -1.0 / p2);
    else if (x > 1.5)
      g_wlp[i] = std::pow(x, -1.0 / pe);
  }
  // sparse cell staircases near the origin, thinning dyadically
  auto sparse_witness = [&](double exponent) {
    GridFunction f(g, Tag::physical);
    const std::vector<long> offsets = {18, -18, 22, -22, 26, -26, 30, -30,  // shell (16h,32h]
                                       10, -12,                             // shell (8h,16h]
                                       5};                                  // shell (0,8h]
    const std::size_t origin = g.samples / 2;
    for (long off : offsets) {
      const std::size_t idx = static_cast<std::size_t>(static_cast<long>(origin) + off);
      const double x = std::abs(g.coord(idx));
      f[idx] = 1.0001 * std::pow(x, -exponent);
    }
    return f;
  };
  GridFunction g_lp_delta = sparse_witness(1.0 / pe);
  GridFunction g_wlp_delta = sparse_witness(1.0 / p1);

  struct Case {
    const GridFunction* f;
    double exponent;
    std::vector<double> sweep;
    const char* name;
  };
  const std::vector<double> m_sweep = {g.length / 8.0, g.length / 4.0, g.length / 2.0};
  const std::vector<double> d_sweep = {32.0 * h, 16.0 * h, 8.0 * h};
  const std::vector<Case> cases = {
      {&g_lp, 1.0 / pe, m_sweep, "lp_large_scale"},
      {&g_lp_delta, 1.0 / pe, d_sweep, "lp_small_scale"},
      {&g_wlp, 1.0 / p2, m_sweep, "weak_lp_large_scale"},
      {&g_wlp_delta, 1.0 / p1, d_sweep, "weak_lp_small_scale"},
  };
  int witness_id = 0;
  for (const auto& c : cases) {
    double prev = std::numeric_limits<double>::infinity();
    bool strict = true;
    for (double radius : c.sweep) {
      const double r = ratio_at(*c.f, c.exponent, radius);
      // sweeps are ordered so that the limit value should shrink step by step
      if (!(r < prev)) strict = false;
      prev = r;
      rep.rows.push_back({static_cast<double>(witness_id), radius, r});
    }
    rep.constants[std::string("strict_") + c.name] = strict ? 1.0 : 0.0;
    rep.require(strict, std::string("ratios not strictly decreasing for ") + c.name);
    ++witness_id;
  }
  return rep;
}

VerifyReport check_interpolation(const ScenarioParams& p) {
  VerifyReport rep;
  rep.scenario = "interpolation";
  const Grid g = p.grid(4096, 16.0);
  const auto count = static_cast<std::size_t>(p.get("count", 20));
  const double p1 = p.get("p1", 0.8);
  const double pe = p.get("p", 1.0);
  const double p2 = p.get("p2", 2.0);
  const double threshold = p.get("threshold", 1000.0);
  if (!(p1 < pe && pe < p2 && p1 <= 1.0))
    throw std::invalid_argument("interpolation: need p1 < p < p2 with p1 <= 1");
  rep.params = {{"samples", static_cast<double>(g.samples)},
                {"count", static_cast<double>(count)},
                {"p1", p1},
                {"p", pe},
                {"p2", p2}};
  rep.header = {"operator", "instance", "t_weak", "hp_weak", "ratio_to_bound"};

  const LpBump bump = make_lp_bump(p.sharpness);
  const auto kernels = derive_kernels(bump, 0, 1);
  const auto prof = kernels.low_pass_profile();
  const auto range = ScaleRange::full(g, bump);
  const ScaleSet scales = ScaleSet::geometric(g, p.scale_m);
  const double theta = (1.0 / p1 - 1.0 / pe) / (1.0 / p1 - 1.0 / p2);

  for (int op = 0; op < 2; ++op) {
    double A1 = 0.0, A2 = 0.0;
    std::vector<double> t_weak(count), hpw(count);
    for (std::size_t i = 0; i < count; ++i) {
      GridFunction f = random_band_limited(g, p.seed, 8000 + i, true);
      GridFunction tf;
      VectorGridFunction F(std::vector<GridFunction>{f});
      if (op == 0) {
        tf = square_function(f, bump, range);
      } else {
        std::vector<GridFunction> bands;
        for (int j : range.indices()) bands.push_back(band_project(f, j, bump).value);
        tf = kernel_family_apply(VectorGridFunction(std::move(bands)), kernels, range);
      }
      const double h1 = lp_norm(smooth_maximal(F, prof, scales), p1).value;
      const double h2 = lp_norm(smooth_maximal(F, prof, scales), p2).value;
      if (h1 > 1e-12) A1 = std::max(A1, lp_norm(tf, p1).value / h1);
      if (h2 > 1e-12) A2 = std::max(A2, lp_norm(tf, p2).value / h2);
      t_weak[i] = weak_lp(tf, pe).value;
      hpw[i] = weak_lp(smooth_maximal(F, prof, scales), pe).value;
    }
    if (!(A1 > 0.0 && A2 > 0.0)) {
      rep.require(false, "family gives vanishing strong bounds");
      continue;
    }
    const double shape = std::pow(A1, 1.0 - theta) * std::pow(A2, theta);
    double c_emp = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      if (hpw[i] < 1e-12) continue;
      const double c = t_weak[i] / (shape * hpw[i]);
      c_emp = std::max(c_emp, c);
      rep.rows.push_back({static_cast<double>(op), static_cast<double>(i), t_weak[i],
                          hpw[i], c});
    }
    rep.constants[op == 0 ? "A1_square" : "A1_kernel"] = A1;
    rep.constants[op == 0 ? "A2_square" : "A2_kernel"] = A2;
    rep.constants[op == 0 ? "c_square" : "c_kernel"] = c_emp;
    rep.require(c_emp <= threshold && c_emp > 0.0,
                "interpolation constant " + fmt(c_emp) + " over " + fmt(threshold));
  }
  rep.constants["theta"] = theta;
  return rep;
}

}  // namespace lpweak
