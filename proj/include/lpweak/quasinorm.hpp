#pragma once

#include <string>

#include "lpweak/bumps.hpp"
#include "lpweak/grid.hpp"
#include "lpweak/maximal.hpp"

namespace lpweak {

enum class NormMethod { distribution_sup, r_mean_sets, lp };

const char* norm_method_name(NormMethod m);

struct NormReport {
  double p = 0.0;
  double r = 0.0;  // only meaningful for the r-mean method
  double value = 0.0;
  NormMethod method = NormMethod::lp;
  int dim = 1;
  double length = 0.0;
  std::size_t samples = 0;
  int scale_m = 0;  // scale refinement used, when a maximal sweep is involved

  // one CSV row: scenario,p,r,method,value,S,L,m
  std::string csv_row(const std::string& scenario) const;
};

// h^dim * #{ |f| > lambda }
double distribution_function(const GridFunction& f, double lambda);

// sup_{lambda>0} lambda * d_f(lambda)^{1/p}; exact on grid data via the
// descending rearrangement: max_k a_k (k h^dim)^{1/p}.
NormReport weak_lp(const GridFunction& f, double p);

// sup over sets E of |E|^{-1/r+1/p} ( int_E |f|^r )^{1/r} for 0 < r < p.
// The supremum over all sets is attained on superlevel sets of |f|, so only
// prefixes of the rearrangement are scanned.
NormReport weak_lp_r_mean(const GridFunction& f, double p, double r);

// Riemann-sum p-quasinorm.
NormReport lp_norm(const GridFunction& f, double p);

// Weak quasinorm of the smooth maximal function of F taken with the kernel
// whose Fourier profile is `phi` (which must have nonzero integral).
NormReport hp_weak(const VectorGridFunction& F, double p, const RadialProfile& phi,
                   const ScaleSet& scales, int scale_m = 0);

}  // namespace lpweak
