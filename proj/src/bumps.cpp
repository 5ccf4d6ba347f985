#include "lpweak/bumps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace lpweak {

namespace {

double glue(double v, double s) {
  // exp(-s/v) extended by 0 for v <= 0
  return v > 0.0 ? std::exp(-s / v) : 0.0;
}

// dense polynomial in one variable, coefficients low degree first
struct Poly {
  std::vector<double> c;

  static Poly one() { return Poly{{1.0}}; }
  double eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
  Poly derivative() const {
    if (c.size() <= 1) return Poly{{0.0}};
    Poly d;
    d.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
      d.c[i - 1] = c[i] * static_cast<double>(i);
    return d;
  }
  Poly times_x() const {
    Poly r;
    r.c.assign(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i + 1] = c[i];
    return r;
  }
  Poly scaled(double a) const {
    Poly r = *this;
    for (double& v : r.c) v *= a;
    return r;
  }
  Poly plus(const Poly& o) const {
    Poly r;
    r.c.assign(std::max(c.size(), o.c.size()), 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
  }
  Poly times(const Poly& o) const {
    Poly r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }
};

// d^k/du^k exp(-pi u^2) = Q_k(u) exp(-pi u^2)
double gaussian_deriv(int k, double u) {
  Poly q = Poly::one();
  for (int i = 0; i < k; ++i)
    q = q.derivative().plus(q.times_x().scaled(-2.0 * M_PI));
  return q.eval(u) * std::exp(-M_PI * u * u);
}

// d^k/du^k exp(-1/(1-u^2)) = P_k(u) (1-u^2)^{-2k} exp(-1/(1-u^2)), |u|<1
double flat_bump_deriv(int k, double u) {
  const double w = 1.0 - u * u;
  if (w <= 1e-12) return 0.0;
  Poly p = Poly::one();
  const Poly wsq{{1.0, 0.0, -1.0}};  // 1 - u^2
  for (int i = 0; i < k; ++i) {
    Poly a = p.derivative().times(wsq).times(wsq);
    Poly b = p.times_x().times(wsq).scaled(4.0 * static_cast<double>(i));
    Poly c = p.times_x().scaled(-2.0);
    p = a.plus(b).plus(c);
  }
  const double expo = -1.0 / w - 2.0 * static_cast<double>(k) * std::log(w);
  if (expo < -700.0) return 0.0;
  return p.eval(u) * std::exp(expo);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

std::vector<std::vector<int>> multi_indices(int dim, int max_total) {
  std::vector<std::vector<int>> out;
  if (dim == 1) {
    for (int a = 0; a <= max_total; ++a) out.push_back({a});
  } else {
    for (int a = 0; a <= max_total; ++a)
      for (int b = 0; a + b <= max_total; ++b) out.push_back({a, b});
  }
  return out;
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double smooth_step_down(double r, double lo, double hi, double sharpness) {
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  const double u = (r - lo) / (hi - lo);
  const double a = glue(1.0 - u, sharpness);
  const double b = glue(u, sharpness);
  return a / (a + b);
}

LpBump make_lp_bump(double sharpness) {
  if (!(sharpness > 0.0)) throw std::invalid_argument("make_lp_bump: sharpness must be positive");
  return LpBump{sharpness};
}

std::pair<int, int> LpBump::active_band(const Grid& grid) const {
  // smallest positive lattice frequency is 1/L, largest is the Nyquist
  const double xi_min = 1.0 / grid.length;
  const double xi_max = grid.nyquist();
  const int j_min = static_cast<int>(std::ceil(std::log2(xi_min / support_hi)));
  const int j_max = static_cast<int>(std::floor(std::log2(xi_max / support_lo)));
  return {j_min, j_max};
}

double DerivedKernels::block(double r) const {
  double acc = 0.0;
  for (int j = b1; j <= b2; ++j) acc += bump.fourier(std::ldexp(r, -j));
  return acc;
}

DerivedKernels derive_kernels(const LpBump& bump, int b1, int b2) {
  if (b1 >= b2) throw std::invalid_argument("derive_kernels: need b1 < b2");
  return DerivedKernels{bump, b1, b2};
}

GridFunction kernel_on_grid(const Grid& grid, const RadialProfile& profile) {
  GridFunction spec(grid, Tag::spectral);
  for (std::size_t i = 0; i < spec.size(); ++i)
    spec[i] = cplx{profile(grid.freq_abs(i)), 0.0};
  return inverse_transform(spec);
}

double AxisFactor::deriv(int order, double x) const {
  const double u = (x - center) / width;
  auto base_d = [&](int k) {
    const double v = base == Base::gaussian ? gaussian_deriv(k, u) : flat_bump_deriv(k, u);
    return v * std::pow(width, -static_cast<double>(pre_deriv + k));
  };
  if (!modulated) return base_d(order);
  double acc = 0.0;
  for (int j = 0; j <= order; ++j) {
    const double ph = mod_freq * (x - center) + mod_phase +
                      0.5 * M_PI * static_cast<double>(j) + (odd_modulation ? -0.5 * M_PI : 0.0);
    const double mj = std::pow(mod_freq, j) * std::cos(ph);
    acc += binom(order, j) * mj * base_d(order - j);
  }
  return acc;
}

double AxisFactor::support_halfwidth() const {
  return base == Base::gaussian ? 8.0 * width : width;
}

double TestFunction::value(const std::vector<double>& x) const {
  double acc = amplitude;
  for (std::size_t a = 0; a < factors.size(); ++a) acc *= factors[a].value(x[a]);
  return acc;
}

double TestFunction::partial(const std::vector<int>& alpha, const std::vector<double>& x) const {
  double acc = amplitude;
  for (std::size_t a = 0; a < factors.size(); ++a) acc *= factors[a].deriv(alpha[a], x[a]);
  return acc;
}

GridFunction TestFunction::sample_scaled(const Grid& grid, double t) const {
  if (grid.dim != dim()) throw std::invalid_argument("sample_scaled: dimension mismatch");
  GridFunction out(grid, Tag::physical);
  const double tn = grid.dim == 1 ? t : t * t;
  if (grid.dim == 1) {
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = amplitude * factors[0].value(grid.coord(i) / t) / tn;
  } else {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double vx = factors[0].value(grid.coord(grid.axis_x(i)) / t);
      const double vy = factors[1].value(grid.coord(grid.axis_y(i)) / t);
      out[i] = amplitude * vx * vy / tn;
    }
  }
  return out;
}

namespace {

double seminorm_midpoint(const TestFunction& f, int N, const std::vector<double>& x0,
                         double R, std::size_t n_per_axis) {
  const int dim = f.dim();
  const auto alphas = multi_indices(dim, N + 1);
  std::vector<double> lo(dim), hi(dim), step(dim);
  for (int a = 0; a < dim; ++a) {
    const double hw = f.factors[a].support_halfwidth();
    lo[a] = f.factors[a].center - hw;
    hi[a] = f.factors[a].center + hw;
    step[a] = (hi[a] - lo[a]) / static_cast<double>(n_per_axis);
  }
  // per-axis tables of R^k |d^k factor| at the midpoints
  std::vector<std::vector<std::vector<double>>> table(dim);
  for (int a = 0; a < dim; ++a) {
    table[a].assign(N + 2, std::vector<double>(n_per_axis));
    for (int k = 0; k <= N + 1; ++k) {
      const double rk = std::pow(R, k);
      for (std::size_t i = 0; i < n_per_axis; ++i) {
        const double x = lo[a] + (static_cast<double>(i) + 0.5) * step[a];
        table[a][k][i] = rk * std::abs(f.factors[a].deriv(k, x));
      }
    }
  }
  const double amp = std::abs(f.amplitude);
  double acc = 0.0;
  if (dim == 1) {
    for (std::size_t i = 0; i < n_per_axis; ++i) {
      const double x = lo[0] + (static_cast<double>(i) + 0.5) * step[0];
      double s = 0.0;
      for (const auto& alpha : alphas) s += table[0][alpha[0]][i];
      const double w = std::pow(1.0 + std::abs(x - x0[0]) / R, static_cast<double>(N));
      acc += w * amp * s * step[0];
    }
  } else {
    const double cell = step[0] * step[1];
    for (std::size_t i = 0; i < n_per_axis; ++i) {
      const double x = lo[0] + (static_cast<double>(i) + 0.5) * step[0];
      const double dx = x - x0[0];
      for (std::size_t j = 0; j < n_per_axis; ++j) {
        const double y = lo[1] + (static_cast<double>(j) + 0.5) * step[1];
        const double dy = y - x0[1];
        double s = 0.0;
        for (const auto& alpha : alphas)
          s += table[0][alpha[0]][i] * table[1][alpha[1]][j];
        const double w =
            std::pow(1.0 + std::sqrt(dx * dx + dy * dy) / R, static_cast<double>(N));
        acc += w * amp * s * cell;
      }
    }
  }
  return acc;
}

}  // namespace

double schwartz_seminorm(const TestFunction& f, int N, const std::vector<double>& x0,
                         double R) {
  if (N < 0) throw std::invalid_argument("schwartz_seminorm: N must be >= 0");
  if (!(R > 0.0)) throw std::invalid_argument("schwartz_seminorm: R must be positive");
  const bool two_d = f.dim() == 2;
  std::size_t n = two_d ? 64 : 512;
  const std::size_t n_cap = two_d ? 4096 : (1u << 18);
  const double tol = two_d ? 1e-6 : 1e-7;
  double prev = seminorm_midpoint(f, N, x0, R, n);
  while (n < n_cap) {
    n *= 2;
    const double cur = seminorm_midpoint(f, N, x0, R, n);
    if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

double schwartz_seminorm(const TestFunction& f, int N) {
  return schwartz_seminorm(f, N, std::vector<double>(f.dim(), 0.0), 1.0);
}

SeminormResult schwartz_seminorm(const GridFunction& f, int N,
                                 const std::vector<double>& x0, double R) {
  if (f.tag != Tag::physical)
    throw std::invalid_argument("schwartz_seminorm: expected physical input");
  const Grid& g = f.grid;
  const auto alphas = multi_indices(g.dim, N + 1);
  GridFunction fh = forward_transform(f);

  GridFunction acc(g, Tag::physical);
  double top_deriv_seam = 0.0, top_deriv_max = 0.0;
  for (const auto& alpha : alphas) {
    GridFunction dh(g, Tag::spectral);
    const double two_pi_over_L = 2.0 * M_PI / g.length;
    for (std::size_t i = 0; i < dh.size(); ++i) {
      cplx mult{1.0, 0.0};
      const cplx ifx{0.0, two_pi_over_L * static_cast<double>(g.mode(g.axis_x(i)))};
      for (int k = 0; k < alpha[0]; ++k) mult *= ifx;
      if (g.dim == 2) {
        const cplx ify{0.0, two_pi_over_L * static_cast<double>(g.mode(g.axis_y(i)))};
        for (int k = 0; k < alpha[1]; ++k) mult *= ify;
      }
      dh[i] = fh[i] * mult;
    }
    GridFunction d = inverse_transform(dh);
    const int tot = g.dim == 1 ? alpha[0] : alpha[0] + alpha[1];
    const double rfac = std::pow(R, tot);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += rfac * std::abs(d[i]);
    if (tot == N + 1 || tot == 0) {
      for (std::size_t i = 0; i < d.size(); ++i) {
        const double mag = std::abs(d[i]);
        top_deriv_max = std::max(top_deriv_max, mag);
        const std::size_t ix = g.axis_x(i), iy = g.axis_y(i);
        const bool seam = ix <= 1 || ix >= g.samples - 2 ||
                          (g.dim == 2 && (iy <= 1 || iy >= g.samples - 2));
        if (seam) top_deriv_seam = std::max(top_deriv_seam, mag);
      }
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    double d2 = 0.0;
    const double dx = g.coord(g.axis_x(i)) - x0[0];
    d2 += dx * dx;
    if (g.dim == 2) {
      const double dy = g.coord(g.axis_y(i)) - x0[1];
      d2 += dy * dy;
    }
    total += std::pow(1.0 + std::sqrt(d2) / R, static_cast<double>(N)) * acc[i].real();
  }
  SeminormResult res;
  res.value = total * g.cell_measure();
  res.lower_bound_only = top_deriv_seam > 1e-10 * top_deriv_max;
  return res;
}

namespace {

TestFunction dictionary_element(int dim, std::size_t index, std::uint64_t seed) {
  TestFunction tf;
  tf.factors.resize(dim);
  auto set_all = [&](AxisFactor fac) {
    for (auto& f : tf.factors) f = fac;
  };
  AxisFactor base;
  switch (index) {
    case 0:  // canonical mollifier, nonzero integral
      base.base = AxisFactor::Base::flat_bump;
      set_all(base);
      tf.name = "mollifier";
      return tf;
    case 1:
      base.base = AxisFactor::Base::gaussian;
      set_all(base);
      tf.name = "gauss";
      return tf;
    case 2:
      base.base = AxisFactor::Base::gaussian;
      base.width = 0.5;
      set_all(base);
      tf.name = "gauss_narrow";
      return tf;
    case 3:
      base.base = AxisFactor::Base::flat_bump;
      base.width = 0.5;
      set_all(base);
      tf.name = "bump_narrow";
      return tf;
    case 4:
      base.base = AxisFactor::Base::gaussian;
      set_all(base);
      tf.factors[0].pre_deriv = 1;
      tf.name = "gauss_dx";
      return tf;
    case 5:
      base.base = AxisFactor::Base::flat_bump;
      set_all(base);
      tf.factors[0].pre_deriv = 1;
      tf.name = "bump_dx";
      return tf;
    case 6:
      base.base = AxisFactor::Base::gaussian;
      base.modulated = true;
      base.mod_freq = 2.0;
      set_all(base);
      tf.name = "gauss_cos2";
      return tf;
    case 7:
      base.base = AxisFactor::Base::gaussian;
      base.modulated = true;
      base.mod_freq = 3.0;
      base.odd_modulation = true;
      set_all(base);
      tf.name = "gauss_sin3";
      return tf;
    default:
      break;
  }
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + index);
  for (auto& f : tf.factors) {
    f.base = (rng() & 1u) ? AxisFactor::Base::gaussian : AxisFactor::Base::flat_bump;
    f.width = std::exp2(-2.0 + 3.0 * u01(rng));
    f.pre_deriv = (rng() % 4 == 0) ? 1 : 0;
    if (rng() & 1u) {
      f.modulated = true;
      f.mod_freq = 0.5 + 3.5 * u01(rng);
      f.odd_modulation = (rng() & 1u) != 0;
    }
  }
  tf.name = "seeded_" + std::to_string(index);
  return tf;
}

}  // namespace

std::vector<DictionaryEntry> build_dictionary(int dim, int N, std::size_t size,
                                              std::uint64_t seed) {
  if (size < 8) throw std::invalid_argument("build_dictionary: size must be >= 8");
  if (dim != 1 && dim != 2) throw std::invalid_argument("build_dictionary: dim must be 1 or 2");

  static std::map<std::tuple<int, int, std::size_t, std::uint64_t>,
                  std::vector<DictionaryEntry>>
      cache;
  static std::mutex cache_mutex;
  const auto key = std::make_tuple(dim, N, size, seed);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  std::vector<DictionaryEntry> dict;
  dict.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    DictionaryEntry e;
    e.fn = dictionary_element(dim, i, seed);
    e.raw_seminorm = schwartz_seminorm(e.fn, N);
    e.fn.amplitude /= e.raw_seminorm;
    dict.push_back(std::move(e));
  }

  std::lock_guard<std::mutex> lock(cache_mutex);
  cache[key] = dict;
  return dict;
}

std::string BumpConfig::to_json() const {
  nlohmann::json j;
  j["sharpness"] = sharpness;
  j["b1"] = b1;
  j["b2"] = b2;
  j["N"] = N;
  j["dict_size"] = dict_size;
  j["dict_seed"] = dict_seed;
  return j.dump();
}

BumpConfig BumpConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  BumpConfig c;
  c.sharpness = j.at("sharpness").get<double>();
  c.b1 = j.at("b1").get<int>();
  c.b2 = j.at("b2").get<int>();
  c.N = j.at("N").get<int>();
  c.dict_size = j.at("dict_size").get<std::size_t>();
  c.dict_seed = j.at("dict_seed").get<std::uint64_t>();
  return c;
}

}  // namespace lpweak
