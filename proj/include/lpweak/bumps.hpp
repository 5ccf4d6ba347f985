#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lpweak/grid.hpp"

namespace lpweak {

// Radial function of the frequency magnitude |xi|.
using RadialProfile = std::function<double(double)>;

// Smooth transition 1 -> 0 on [lo, hi] built from the exp(-s/t) glue.
// Exactly 1 for r <= lo and exactly 0 for r >= hi (branch, not limit), smooth
// and strictly decreasing in between; s controls transition steepness.
double smooth_step_down(double r, double lo, double hi, double sharpness);

// Mother bump for the dyadic band decomposition. The Fourier profile is
//   psi_hat(r) = theta(r/2) - theta(r),
// where theta = smooth_step_down on [6/7, 1]. Consequences, all by
// construction: psi_hat >= 0, supp psi_hat in [6/7, 2], psi_hat = 1 on
// [1, 12/7], and sum_j psi_hat(2^-j r) telescopes to 1 for every r > 0.
struct LpBump {
  double sharpness = 1.0;

  static constexpr double support_lo = 6.0 / 7.0;
  static constexpr double support_hi = 2.0;

  double theta(double r) const { return smooth_step_down(r, 6.0 / 7.0, 1.0, sharpness); }
  double fourier(double r) const { return theta(0.5 * r) - theta(r); }
  RadialProfile profile() const {
    return [s = sharpness](double r) {
      return smooth_step_down(0.5 * r, 6.0 / 7.0, 1.0, s) - smooth_step_down(r, 6.0 / 7.0, 1.0, s);
    };
  }
  // band of dyadic indices j whose band [6/7*2^j, 2*2^j] meets (0, nyquist]
  std::pair<int, int> active_band(const Grid& grid) const;
};

LpBump make_lp_bump(double sharpness);

// Kernels derived from the mother bump.
//   low_pass:  sum of all bands at nonpositive scales; equals theta(r/2),
//              value 1 at r = 0, supported in |r| <= 2 (unit integral kernel).
//   envelope:  psi_hat(r/2) + psi_hat(r) + psi_hat(2r); identically 1 on
//              supp psi_hat.
//   block:     sum of bands b1..b2.
struct DerivedKernels {
  LpBump bump;
  int b1 = 0;
  int b2 = 1;

  double low_pass(double r) const { return bump.theta(0.5 * r); }
  double envelope(double r) const {
    return bump.fourier(0.5 * r) + bump.fourier(r) + bump.fourier(2.0 * r);
  }
  double block(double r) const;

  RadialProfile low_pass_profile() const {
    return [b = bump](double r) { return b.theta(0.5 * r); };
  }
  RadialProfile envelope_profile() const {
    return [b = bump](double r) { return b.fourier(0.5 * r) + b.fourier(r) + b.fourier(2.0 * r); };
  }
  RadialProfile block_profile() const {
    return [k = *this](double r) { return k.block(r); };
  }
};

DerivedKernels derive_kernels(const LpBump& bump, int b1, int b2);

// Physical-side samples of the kernel whose discrete transform equals the
// given radial profile on the frequency lattice.
GridFunction kernel_on_grid(const Grid& grid, const RadialProfile& profile);

// Closed-form test function: product over axes of (optionally modulated,
// optionally differentiated) Gaussian or compactly supported bump atoms, with
// derivatives of any order available analytically via polynomial recurrences.
struct AxisFactor {
  enum class Base { gaussian, flat_bump };
  Base base = Base::gaussian;
  double center = 0.0;
  double width = 1.0;
  int pre_deriv = 0;
  bool modulated = false;
  double mod_freq = 0.0;
  double mod_phase = 0.0;
  bool odd_modulation = false;  // sine instead of cosine

  double deriv(int order, double x) const;
  double value(double x) const { return deriv(0, x); }
  double support_halfwidth() const;
};

struct TestFunction {
  std::vector<AxisFactor> factors;  // one per axis
  double amplitude = 1.0;
  std::string name;

  int dim() const { return static_cast<int>(factors.size()); }
  double value(const std::vector<double>& x) const;
  double partial(const std::vector<int>& alpha, const std::vector<double>& x) const;
  // physical samples of t^{-dim} f(x/t) on the grid
  GridFunction sample_scaled(const Grid& grid, double t) const;
};

struct SeminormResult {
  double value = 0.0;
  bool lower_bound_only = false;
};

// Integral of (1 + |x-x0|/R)^N * sum_{|alpha|<=N+1} R^{|alpha|} |d^alpha f|.
// Closed-form variant: adaptive midpoint refinement until 1e-7 relative.
double schwartz_seminorm(const TestFunction& f, int N,
                         const std::vector<double>& x0, double R);
double schwartz_seminorm(const TestFunction& f, int N);

// Grid variant with spectral differentiation; flags the result as a lower
// bound when the samples do not decay near the wrap seam of the torus.
SeminormResult schwartz_seminorm(const GridFunction& f, int N,
                                 const std::vector<double>& x0, double R);

// Deterministic finite family approximating the unit ball of the seminorm:
// Gaussians, compactly supported bumps, first derivatives and modulations,
// each scaled so its seminorm is 1; element i depends on (seed, i) only, so a
// shorter dictionary is a prefix of a longer one. Element 0 is the canonical
// mollifier (nonzero integral).
struct DictionaryEntry {
  TestFunction fn;          // normalized: seminorm == 1
  double raw_seminorm = 0;  // seminorm before normalization
};

std::vector<DictionaryEntry> build_dictionary(int dim, int N, std::size_t size,
                                              std::uint64_t seed);

// Parameter block for the bump family and its dictionary; serializes to a
// small JSON object.
struct BumpConfig {
  double sharpness = 1.0;
  int b1 = 0;
  int b2 = 1;
  int N = 2;
  std::size_t dict_size = 12;
  std::uint64_t dict_seed = 12345;

  std::string to_json() const;
  static BumpConfig from_json(const std::string& text);
  bool operator==(const BumpConfig&) const = default;
};

}  // namespace lpweak
