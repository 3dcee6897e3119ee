#pragma once

#include <vector>

#include "xorsep/types.hpp"

namespace xorsep {

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
};

// 95% Wilson score interval by default (z = Phi^{-1}(0.975)).
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z = 1.959963984540054);

// Empirical tail of max_{j<=j'} |N^{-1} sum_l g_j^l g_{j'}^l - delta_jj'|
// against the Bernstein-type bound 2 exp(2 log m - c N min(t^2/C^2, t/C)).
// A grid point passes when the bound with the fitted (c, C) dominates the
// Wilson upper edge; the fit maximizes c over a C grid subject to covering
// every point, so enlarging the grid can only shrink c (never flips a
// previously failing point to passing).
struct BernsteinPoint {
  int m = 0;
  int big_n = 0;
  double t = 0.0;
  double estimate = 0.0;  // empirical tail frequency
  double ci_lo = 0.0, ci_hi = 1.0;
  double bound = 0.0;  // with fitted constants
  bool pass = false;
};

struct BernsteinReport {
  std::vector<BernsteinPoint> points;
  double c_fit = 0.0, big_c_fit = 0.0;
  bool single_fit_covers = false;
  int trials = 0;
};

BernsteinReport bernstein_check(const std::vector<int>& ms, const std::vector<int>& big_ns,
                                const std::vector<double>& ts, int trials,
                                std::uint64_t seed);

// Chevet inequality, complex constant b = 4, for the Gaussian element of
// l2^{m^2} (x)_eps S_inf^D built on matrix-unit bases: the left side is the
// Monte Carlo mean of ALS lower estimates, the right side
// 4 (E||G_{DxD}||_inf + E||g_{m^2}||_2) with both means from Monte Carlo and
// the deterministic basis factors equal to 1 exactly.
struct ChevetPoint {
  Index m = 0, d = 0;
  double lhs_estimate = 0.0;
  double lhs_ci_hi = 0.0;  // mean + 2 standard errors
  double rhs = 0.0;
  bool pass = false;
};

struct ChevetReport {
  std::vector<ChevetPoint> points;
  int trials = 0;
  bool all_pass = false;
};

ChevetReport chevet_check(const std::vector<Index>& ms, const std::vector<Index>& ds,
                          int trials, std::uint64_t seed, const AlsOptions& opt = {});

// Monte Carlo means of ||G||_inf and ||G||_1 for N x M real Gaussian matrices,
// with constants fitted against both sqrt(N) + sqrt(M) and
// min(sqrt(N), sqrt(M)). The min-form constant diverges for rectangular
// shapes; min_form_flagged records that discrepancy instead of silently
// switching forms.
struct GaussianScalingPoint {
  int rows = 0, cols = 0;
  double op_mean = 0.0, op_stderr = 0.0;
  double tr_mean = 0.0;
  double c_sum = 0.0;  // op_mean / (sqrt N + sqrt M)
  double c_min = 0.0;  // op_mean / min(sqrt N, sqrt M)
};

struct GaussianScalingReport {
  std::vector<GaussianScalingPoint> points;
  double c_sum_max = 0.0;
  double c_min_max = 0.0;
  bool min_form_flagged = false;  // c_min spread exceeds 2x across the grid
  int trials = 0;
};

GaussianScalingReport gaussian_norm_scaling(const std::vector<std::pair<int, int>>& shapes,
                                            int trials, std::uint64_t seed);

// Gap between the epsilon-norm estimate of tau (over l2^{n^2} factors) and
// its exact operator norm ||g|| ||g'||, with the fitted constant
// C(k) = max_n mean_eps / (n log(n)^{k/2}) over n >= 2.
struct BrietVidickPoint {
  Index n = 0;
  double eps_mean = 0.0;
  double op_mean = 0.0;
  double eps_rate = 0.0;  // eps_mean / (n log(max(n,2))^{k/2})
  double op_rate = 0.0;   // op_mean / n^k
};

struct BrietVidickReport {
  int k = 3;
  std::vector<BrietVidickPoint> points;
  double c_eps_fit = 0.0;
  double c_op_fit = 0.0;  // min_n op_rate
  int trials = 0;
};

BrietVidickReport briet_vidick_scaling(const std::vector<Index>& ns, int k, int trials,
                                       std::uint64_t seed, const AlsOptions& opt = {});

}  // namespace xorsep
