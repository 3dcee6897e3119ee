#include "xorsep/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "xorsep/ensembles.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/tensor.hpp"

namespace xorsep {

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: bad success count");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

BernsteinReport bernstein_check(const std::vector<int>& ms, const std::vector<int>& big_ns,
                                const std::vector<double>& ts, int trials,
                                std::uint64_t seed) {
  struct Cell {
    int m, big_n;
    std::vector<std::int64_t> exceed;  // per t
  };
  std::vector<Cell> cells;
  for (int m : ms)
    for (int big_n : big_ns) cells.push_back({m, big_n, std::vector<std::int64_t>(ts.size(), 0)});

  for (auto& cell : cells) {
    GaussianStream stream(seed, "bernstein/m=" + std::to_string(cell.m) +
                                    "/N=" + std::to_string(cell.big_n));
    const int m = cell.m, big_n = cell.big_n;
    RMatrix gram(m, m);
    std::uint64_t idx = 0;
    RVector g(m);
    for (int trial = 0; trial < trials; ++trial) {
      gram.setZero();
      for (int l = 0; l < big_n; ++l) {
        for (int j = 0; j < m; ++j) g[j] = stream.normal(idx++);
        gram.noalias() += g * g.transpose();
      }
      gram /= static_cast<double>(big_n);
      double dev = 0.0;
      for (int j = 0; j < m; ++j)
        for (int jp = j; jp < m; ++jp)
          dev = std::max(dev, std::abs(gram(j, jp) - (j == jp ? 1.0 : 0.0)));
      for (std::size_t ti = 0; ti < ts.size(); ++ti)
        if (dev > ts[ti]) ++cell.exceed[ti];
    }
  }

  BernsteinReport report;
  report.trials = trials;
  std::vector<double> ci_his;
  std::vector<BernsteinPoint> points;
  for (const auto& cell : cells)
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      BernsteinPoint pt;
      pt.m = cell.m;
      pt.big_n = cell.big_n;
      pt.t = ts[ti];
      const WilsonInterval wi = wilson_interval(cell.exceed[ti], trials);
      pt.estimate = static_cast<double>(cell.exceed[ti]) / static_cast<double>(trials);
      pt.ci_lo = wi.lo;
      pt.ci_hi = wi.hi;
      points.push_back(pt);
    }

  // Fit: for each C in the grid the largest admissible c is the min over
  // points of (2 log m - log(ci_hi / 2)) / (N rate). Any such pair covers by
  // construction; keep the one whose bounds are tightest in aggregate
  // (smallest sum of log bounds over the grid).
  const std::vector<double> c_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  double best_c = 0.0, best_big_c = c_grid.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double big_c : c_grid) {
    double c_max = std::numeric_limits<double>::infinity();
    for (const auto& pt : points) {
      const double rate = std::min(pt.t * pt.t / (big_c * big_c), pt.t / big_c);
      const double ci_hi = std::max(pt.ci_hi, 1e-300);
      const double admissible =
          (2.0 * std::log(static_cast<double>(pt.m)) - std::log(ci_hi / 2.0)) /
          (static_cast<double>(pt.big_n) * rate);
      c_max = std::min(c_max, admissible);
    }
    if (!(c_max > 0.0)) continue;
    double score = 0.0;
    for (const auto& pt : points) {
      const double rate = std::min(pt.t * pt.t / (big_c * big_c), pt.t / big_c);
      score += 2.0 * std::log(static_cast<double>(pt.m)) -
               c_max * static_cast<double>(pt.big_n) * rate;
    }
    if (score < best_score) {
      best_score = score;
      best_c = c_max;
      best_big_c = big_c;
    }
  }
  // The binding point is tight by construction; back off one part in 1e9 so
  // the reported pair covers it under strict comparison too.
  best_c *= 1.0 - 1e-9;
  report.c_fit = best_c;
  report.big_c_fit = best_big_c;
  report.single_fit_covers = best_c > 0.0;

  for (auto& pt : points) {
    const double rate =
        std::min(pt.t * pt.t / (best_big_c * best_big_c), pt.t / best_big_c);
    pt.bound = 2.0 * std::exp(2.0 * std::log(static_cast<double>(pt.m)) -
                              best_c * static_cast<double>(pt.big_n) * rate);
    pt.pass = pt.bound >= pt.ci_hi;
  }
  report.points = std::move(points);
  return report;
}

ChevetReport chevet_check(const std::vector<Index>& ms, const std::vector<Index>& ds,
                          int trials, std::uint64_t seed, const AlsOptions& opt) {
  ChevetReport report;
  report.trials = trials;
  report.all_pass = true;
  for (Index m : ms)
    for (Index d : ds) {
      GaussianStream lhs_stream(seed, "chevet/lhs/m=" + std::to_string(m) +
                                          "/D=" + std::to_string(d));
      GaussianStream g_stream(seed, "chevet/rhs_gauss/D=" + std::to_string(d));
      GaussianStream v_stream(seed, "chevet/rhs_vec/m=" + std::to_string(m));

      double lhs_sum = 0.0, lhs_sq = 0.0, op_sum = 0.0, vec_sum = 0.0;
      std::uint64_t lhs_idx = 0, g_idx = 0, v_idx = 0;
      for (int trial = 0; trial < trials; ++trial) {
        DenseTensor w = zeros_tensor({m * m, d, d});
        for (Index i = 0; i < w.size(); ++i) w.data[i] = lhs_stream.normal(lhs_idx++);
        const double value = l2_injective_lb(w, opt).estimate.value;
        lhs_sum += value;
        lhs_sq += value * value;

        CMatrix g(d, d);
        for (Index c = 0; c < d; ++c)
          for (Index r = 0; r < d; ++r) g(r, c) = g_stream.normal(g_idx++);
        op_sum += operator_norm(g);

        RVector v(m * m);
        for (Index i = 0; i < m * m; ++i) v[i] = v_stream.normal(v_idx++);
        vec_sum += v.norm();
      }
      const double n = static_cast<double>(trials);
      ChevetPoint pt;
      pt.m = m;
      pt.d = d;
      pt.lhs_estimate = lhs_sum / n;
      const double var = std::max(lhs_sq / n - pt.lhs_estimate * pt.lhs_estimate, 0.0);
      pt.lhs_ci_hi = pt.lhs_estimate + 2.0 * std::sqrt(var / n);
      pt.rhs = 4.0 * (op_sum / n + vec_sum / n);
      pt.pass = pt.lhs_ci_hi <= pt.rhs;
      report.all_pass = report.all_pass && pt.pass;
      report.points.push_back(pt);
    }
  return report;
}

GaussianScalingReport gaussian_norm_scaling(const std::vector<std::pair<int, int>>& shapes,
                                            int trials, std::uint64_t seed) {
  GaussianScalingReport report;
  report.trials = trials;
  double c_min_lo = std::numeric_limits<double>::infinity();
  for (const auto& [rows, cols] : shapes) {
    GaussianStream stream(seed, "gauss/N=" + std::to_string(rows) +
                                    "/M=" + std::to_string(cols));
    std::uint64_t idx = 0;
    double op_sum = 0.0, op_sq = 0.0, tr_sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      CMatrix g(rows, cols);
      for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) g(r, c) = stream.normal(idx++);
      Eigen::BDCSVD<CMatrix> svd(g);
      const double op = svd.singularValues()(0);
      op_sum += op;
      op_sq += op * op;
      tr_sum += svd.singularValues().sum();
    }
    const double n = static_cast<double>(trials);
    GaussianScalingPoint pt;
    pt.rows = rows;
    pt.cols = cols;
    pt.op_mean = op_sum / n;
    pt.op_stderr = std::sqrt(std::max(op_sq / n - pt.op_mean * pt.op_mean, 0.0) / n);
    pt.tr_mean = tr_sum / n;
    const double sr = std::sqrt(static_cast<double>(rows)), sc = std::sqrt(static_cast<double>(cols));
    pt.c_sum = pt.op_mean / (sr + sc);
    pt.c_min = pt.op_mean / std::min(sr, sc);
    report.c_sum_max = std::max(report.c_sum_max, pt.c_sum);
    report.c_min_max = std::max(report.c_min_max, pt.c_min);
    c_min_lo = std::min(c_min_lo, pt.c_min);
    report.points.push_back(pt);
  }
  report.min_form_flagged = !report.points.empty() && report.c_min_max > 2.0 * c_min_lo;
  return report;
}

BrietVidickReport briet_vidick_scaling(const std::vector<Index>& ns, int k, int trials,
                                       std::uint64_t seed, const AlsOptions& opt) {
  BrietVidickReport report;
  report.k = k;
  report.trials = trials;
  for (Index n : ns) {
    double eps_sum = 0.0, op_sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
      const std::uint64_t sub_seed =
          seed * 1000000ull + static_cast<std::uint64_t>(n) * 10000ull +
          static_cast<std::uint64_t>(trial);
      const TauSample tau = sample_tau(n, k, sub_seed);
      eps_sum += l2_injective_lb(tau.tensor(), opt).estimate.value;
      op_sum += tau.g.norm() * tau.gp.norm();
    }
    const double nn = static_cast<double>(trials);
    BrietVidickPoint pt;
    pt.n = n;
    pt.eps_mean = eps_sum / nn;
    pt.op_mean = op_sum / nn;
    const double logn = std::log(static_cast<double>(std::max<Index>(n, 2)));
    pt.eps_rate = pt.eps_mean / (static_cast<double>(n) * std::pow(logn, 0.5 * k));
    pt.op_rate = pt.op_mean / std::pow(static_cast<double>(n), k);
    report.points.push_back(pt);
  }
  for (const auto& pt : report.points) {
    if (pt.n >= 2) report.c_eps_fit = std::max(report.c_eps_fit, pt.eps_rate);
    report.c_op_fit = report.c_op_fit == 0.0 ? pt.op_rate : std::min(report.c_op_fit, pt.op_rate);
  }
  return report;
}

}  // namespace xorsep
