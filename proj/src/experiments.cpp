#include "xorsep/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "xorsep/linalg.hpp"
#include "xorsep/rng.hpp"
#include "xorsep/serialization.hpp"
#include "xorsep/simulator.hpp"

namespace xorsep {

int worker_count() {
  if (const char* env = std::getenv("XORSEP_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(Index n, const std::function<void(Index)>& fn) {
  if (n <= 0) return;
  const int workers = static_cast<int>(std::min<Index>(worker_count(), n));
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<Index> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const Index i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          next.store(n);  // drain remaining work
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

KronTermSum scaled(const KronTermSum& z, double factor) {
  KronTermSum out = z;
  for (auto& term : out.terms) term.coeff *= factor;
  return out;
}

struct ProductKtsResult {
  double value = 0.0;
  std::vector<CMatrix> observables;
  std::vector<double> trace;
  bool converged = false;
};

// Unit-norm hermitian maximizer of tr(A h): sign of h, zero eigenvalues to +1.
CMatrix sign_from(const Eigensystem& eig) {
  const Index n = eig.values.size();
  CMatrix sign = CMatrix::Zero(n, n);
  for (Index e = 0; e < n; ++e)
    sign += (eig.values[e] < 0.0 ? -1.0 : 1.0) * eig.vectors.col(e) *
            eig.vectors.col(e).adjoint();
  return sign;
}

CMatrix hermitian_sign_of(const CMatrix& h) { return sign_from(hermitian_spectral(h)); }

// Product see-saw directly on the term sum. The objective
//   <z, A_1 (x) ... (x) A_k> = sum_t c_t prod_j tr(A_j A_tj)
// is linear in each hermitian unit-norm observable; the exact partial
// maximizer is the sign of the symmetrized effective matrix, with value its
// trace norm, so the trace is monotone.
ProductKtsResult product_lb_kts(const KronTermSum& z, const AlsOptions& opt) {
  const int k = z.order();
  const Index t_count = static_cast<Index>(z.terms.size());
  ProductKtsResult best;
  best.observables.assign(static_cast<std::size_t>(k), CMatrix());
  if (t_count == 0) {
    best.converged = true;
    return best;
  }
  const FactorDedup dd = dedup_factors(z);

  for (int r = 0; r < opt.restarts; ++r) {
    GaussianStream stream(opt.seed, "prodkts/restart/" + std::to_string(r));
    std::uint64_t counter = 0;
    std::vector<CMatrix> obs(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      const Index d = z.local_dims[j];
      CMatrix g(d, d);
      for (Index c = 0; c < d; ++c)
        for (Index row = 0; row < d; ++row) {
          g(row, c) = Complex(stream.normal(counter), stream.normal(counter + 1));
          counter += 2;
        }
      obs[static_cast<std::size_t>(j)] = hermitian_sign_of((g + g.adjoint()) / 2.0);
    }

    CMatrix s(t_count, k);  // s(t, j) = tr(A_j A_tj)
    const auto refresh_mode = [&](int j) {
      const auto& uf = dd.unique[static_cast<std::size_t>(j)];
      CVector val(static_cast<Index>(uf.size()));
      for (std::size_t x = 0; x < uf.size(); ++x)
        val[static_cast<Index>(x)] =
            obs[static_cast<std::size_t>(j)].transpose().cwiseProduct(uf[x]).sum();
      for (Index t = 0; t < t_count; ++t)
        s(t, j) = val[dd.map[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]];
    };
    for (int j = 0; j < k; ++j) refresh_mode(j);

    std::vector<double> trace;
    double value = 0.0;
    bool converged = false;
    for (int it = 0; it < opt.max_iterations && !converged; ++it) {
      const double prev = value;
      for (int i = 0; i < k; ++i) {
        const auto& uf = dd.unique[static_cast<std::size_t>(i)];
        const auto& map = dd.map[static_cast<std::size_t>(i)];
        CVector weights = CVector::Zero(static_cast<Index>(uf.size()));
        for (Index t = 0; t < t_count; ++t) {
          Complex prod = z.terms[t].coeff;
          for (int j = 0; j < k; ++j)
            if (j != i) prod *= s(t, j);
          weights[map[static_cast<std::size_t>(t)]] += prod;
        }
        CMatrix c = CMatrix::Zero(z.local_dims[i], z.local_dims[i]);
        for (std::size_t x = 0; x < uf.size(); ++x)
          c += weights[static_cast<Index>(x)] * uf[x];
        const CMatrix c_sym = (c + c.adjoint()) / 2.0;
        const Eigensystem eig = hermitian_spectral(c_sym);
        const double tn = eig.values.cwiseAbs().sum();
        if (tn > 0.0) {
          obs[static_cast<std::size_t>(i)] = sign_from(eig);
          refresh_mode(i);
          value = tn;
        }
        trace.push_back(value);
      }
      converged =
          std::abs(value - prev) <= opt.tol * std::max({std::abs(value), std::abs(prev), 1e-300});
    }
    if (value > best.value || best.trace.empty()) {
      best.value = value;
      best.observables = obs;
      best.trace = std::move(trace);
      best.converged = converged;
    }
  }
  return best;
}

ScanRow scan_row(const ScanConfig& config, Index m, Index d, std::uint64_t seed) {
  ScanRow row;
  row.k = config.k;
  row.m = m;
  row.d = d;
  row.seed = seed;

  InstanceParams params;
  params.k = config.k;
  params.m = m;
  params.D = d;
  params.seed = seed;
  const RawInstance inst = sample_f_blocks(params);
  const TauAcceptance tau =
      resample_good_tau(m, config.k, seed, default_tau_thresholds(m, config.k),
                        config.tau_max_tries, config.als);
  row.tau_accepted = tau.accepted;
  row.tau_tries = tau.tries;

  const KronTermSum zh = hermitize(build_z(inst, tau.sample));
  row.z_fro = frobenius_norm(zh);
  if (!(row.z_fro > 0.0)) throw std::runtime_error("scan_row: degenerate game element");
  const KronTermSum zn = scaled(zh, 1.0 / row.z_fro);

  const Index total = zn.total_dim();
  row.dense = !config.matrix_free && total <= config.dense_cutoff && total <= kDensifyCap;
  if (row.dense) {
    const double tn = trace_norm(densify(zn));
    row.trace_norm_lb = row.trace_norm_ub = tn;
  } else {
    row.trace_norm_ub = trace_norm_triangle_ub(zn);
    row.trace_norm_lb = 1.0;  // ||zn||_F = 1 by construction and ||.||_1 >= ||.||_F
  }

  const ProductKtsResult prod = product_lb_kts(zn, config.als);
  row.product_lb_raw = prod.value;
  row.product_trace = prod.trace;

  // Warm start U_i = A_i (x) 1 makes the entangled bound dominate the product
  // bound by construction (its first state update lands on the product value).
  std::vector<CMatrix> warm(static_cast<std::size_t>(config.k));
  for (int i = 0; i < config.k; ++i)
    warm[static_cast<std::size_t>(i)] =
        kron_all({prod.observables[static_cast<std::size_t>(i)],
                  CMatrix::Identity(config.ancilla_dim, config.ancilla_dim)});
  MinNormResult min_res = min_norm_seesaw(zn, config.ancilla_dim, config.als, {warm});
  row.min_lb_raw = min_res.estimate.value;
  row.min_cert = std::move(min_res.certificate);
  row.min_trace = std::move(min_res.trace);

  EpsResult eps = eps_sinfty_lb(zn, config.als);
  row.eps_lb_raw = eps.estimate.value;
  row.eps_cert = std::move(eps.certificate);
  row.eps_trace = std::move(eps.trace);
  row.eps_ub_raw = eps_sinfty_ub_chain(zn).value;

  const double dim_factor = std::pow(2.0 * static_cast<double>(d), config.k);
  row.beta_star_lb = row.min_lb_raw / row.trace_norm_ub;
  row.sep_ub_cert = dim_factor * row.eps_ub_raw / row.trace_norm_lb;
  row.sep_ub_heur = dim_factor * row.eps_lb_raw / row.trace_norm_lb;
  row.ratio_cert = row.min_lb_raw / (dim_factor * row.eps_ub_raw);
  row.ratio_heur = row.min_lb_raw / (dim_factor * row.eps_lb_raw);
  return row;
}

std::vector<std::tuple<Index, Index, std::uint64_t>> scan_points(const ScanConfig& config) {
  std::vector<std::tuple<Index, Index, std::uint64_t>> points;
  for (Index m : config.ms)
    for (Index d : config.ds)
      for (int s = 0; s < config.seed_count; ++s)
        points.emplace_back(m, d, config.seed_base + static_cast<std::uint64_t>(s));
  return points;
}

}  // namespace

ScanReport run_scan(const ScanConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ScanReport report;
  report.config = config;
  const auto points = scan_points(config);
  report.rows.resize(points.size());
  parallel_for(static_cast<Index>(points.size()), [&](Index i) {
    const auto& [m, d, seed] = points[static_cast<std::size_t>(i)];
    report.rows[static_cast<std::size_t>(i)] = scan_row(config, m, d, seed);
  });
  report.wall_seconds = seconds_since(start);
  return report;
}

ControlReport run_control_k2(ScanConfig config) {
  config.k = 2;
  const auto start = std::chrono::steady_clock::now();
  ControlReport report;
  report.config = config;
  const auto points = scan_points(config);
  report.rows.resize(points.size());
  parallel_for(static_cast<Index>(points.size()), [&](Index i) {
    const auto& [m, d, seed] = points[static_cast<std::size_t>(i)];
    ControlRow& row = report.rows[static_cast<std::size_t>(i)];
    row.scan = scan_row(config, m, d, seed);
    // At two factors the only unfolding is the matrix itself, so the chain
    // upper bound is the exact l2-injective norm (an SVD).
    const KronTermSum zh = rebuild_hermitized_z(config, row.scan);
    row.l2_injective_exact = eps_sinfty_ub_chain(scaled(zh, 1.0 / row.scan.z_fro)).value;
  });
  report.wall_seconds = seconds_since(start);
  return report;
}

KronTermSum rebuild_hermitized_z(const ScanConfig& config, const ScanRow& row) {
  InstanceParams params;
  params.k = row.k;
  params.m = row.m;
  params.D = row.d;
  params.seed = row.seed;
  const RawInstance inst = sample_f_blocks(params);
  const TauAcceptance tau =
      resample_good_tau(row.m, row.k, row.seed, default_tau_thresholds(row.m, row.k),
                        config.tau_max_tries, config.als);
  return hermitize(build_z(inst, tau.sample));
}

ReplayCheck replay_row(const ScanConfig& config, const ScanRow& row) {
  const KronTermSum zh = rebuild_hermitized_z(config, row);
  const KronTermSum zn = scaled(zh, 1.0 / frobenius_norm(zh));
  ReplayCheck out;
  out.min_stored = row.min_cert.value;
  out.eps_stored = row.eps_cert.value;
  out.min_replay = min_norm_certificate_value(zn, row.min_cert);
  out.eps_replay = eps_certificate_value(zn, row.eps_cert);
  return out;
}

// ---------------------------------------------------------------------------
// emitters
// ---------------------------------------------------------------------------

namespace {

void append_scan_fields(std::ostringstream& os, const ScanRow& r) {
  os << r.k << ',' << r.m << ',' << r.d << ',' << r.seed << ',' << r.beta_star_lb << ','
     << r.sep_ub_cert << ',' << r.sep_ub_heur << ',' << r.ratio_cert << ',' << r.ratio_heur;
}

nlohmann::json als_json(const AlsOptions& o) {
  return {{"restarts", o.restarts},
          {"max_iterations", o.max_iterations},
          {"tol", o.tol},
          {"seed", o.seed}};
}

nlohmann::json config_json(const ScanConfig& c) {
  return {{"k", c.k},
          {"ms", c.ms},
          {"ds", c.ds},
          {"seed_count", c.seed_count},
          {"seed_base", c.seed_base},
          {"ancilla_dim", c.ancilla_dim},
          {"als", als_json(c.als)},
          {"tau_max_tries", c.tau_max_tries},
          {"dense_cutoff", c.dense_cutoff},
          {"matrix_free", c.matrix_free}};
}

nlohmann::json row_json(const ScanRow& r) {
  nlohmann::json j{{"k", r.k},
                   {"m", r.m},
                   {"D", r.d},
                   {"seed", r.seed},
                   {"beta_star_lb", r.beta_star_lb},
                   {"sep_ub_cert", r.sep_ub_cert},
                   {"sep_ub_heur", r.sep_ub_heur},
                   {"ratio_cert", r.ratio_cert},
                   {"ratio_heur", r.ratio_heur},
                   {"min_lb_raw", r.min_lb_raw},
                   {"eps_lb_raw", r.eps_lb_raw},
                   {"eps_ub_raw", r.eps_ub_raw},
                   {"product_lb_raw", r.product_lb_raw},
                   {"trace_norm_lb", r.trace_norm_lb},
                   {"trace_norm_ub", r.trace_norm_ub},
                   {"z_fro", r.z_fro},
                   {"dense", r.dense},
                   {"tau_accepted", r.tau_accepted},
                   {"tau_tries", r.tau_tries},
                   {"min_trace", r.min_trace},
                   {"eps_trace", r.eps_trace},
                   {"product_trace", r.product_trace}};
  to_json(j["min_cert"], r.min_cert);
  to_json(j["eps_cert"], r.eps_cert);
  return j;
}

}  // namespace

std::string scan_csv(const ScanReport& report) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "k,m,D,seed,beta_star_lb,sep_ub_cert,sep_ub_heur,ratio_cert,ratio_heur\n";
  for (const ScanRow& r : report.rows) {
    append_scan_fields(os, r);
    os << '\n';
  }
  return os.str();
}

std::string control_csv(const ControlReport& report) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "k,m,D,seed,beta_star_lb,sep_ub_cert,sep_ub_heur,ratio_cert,ratio_heur,"
        "l2_injective_exact\n";
  for (const ControlRow& r : report.rows) {
    append_scan_fields(os, r.scan);
    os << ',' << r.l2_injective_exact << '\n';
  }
  return os.str();
}

nlohmann::json scan_json(const ScanReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& r : report.rows) rows.push_back(row_json(r));
  return {{"config", config_json(report.config)},
          {"wall_seconds", report.wall_seconds},
          {"rows", rows}};
}

nlohmann::json control_json(const ControlReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ControlRow& r : report.rows) {
    nlohmann::json j = row_json(r.scan);
    j["l2_injective_exact"] = r.l2_injective_exact;
    rows.push_back(std::move(j));
  }
  return {{"config", config_json(report.config)},
          {"wall_seconds", report.wall_seconds},
          {"rows", rows}};
}

// ---------------------------------------------------------------------------
// concentration and simulation drivers
// ---------------------------------------------------------------------------

ConcentrationReport run_concentration(const ConcentrationConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const AlsOptions als{16, 300, 1e-9, 0};
  ConcentrationReport report;
  report.bernstein = bernstein_check(config.bernstein_ms, config.bernstein_ns,
                                     config.bernstein_ts, config.bernstein_trials, config.seed);
  report.chevet =
      chevet_check(config.chevet_ms, config.chevet_ds, config.chevet_trials, config.seed, als);
  report.gaussian = gaussian_norm_scaling(config.gaussian_shapes, config.gaussian_trials,
                                          config.seed);
  report.briet_vidick =
      briet_vidick_scaling(config.bv_ns, config.bv_k, config.bv_trials, config.seed, als);
  report.wall_seconds = seconds_since(start);
  return report;
}

std::string concentration_csv(const ConcentrationReport& report) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "check,p1,p2,p3,estimate,ci_lo,ci_hi,bound,pass\n";
  for (const auto& p : report.bernstein.points)
    os << "bernstein," << p.m << ',' << p.big_n << ',' << p.t << ',' << p.estimate << ','
       << p.ci_lo << ',' << p.ci_hi << ',' << p.bound << ',' << (p.pass ? 1 : 0) << '\n';
  for (const auto& p : report.chevet.points)
    os << "chevet," << p.m << ',' << p.d << ",0," << p.lhs_estimate << ",0," << p.lhs_ci_hi
       << ',' << p.rhs << ',' << (p.pass ? 1 : 0) << '\n';
  for (const auto& p : report.gaussian.points) {
    // Estimate is op_mean normalized by sqrt(N) + sqrt(M); the bound 1 is the
    // Gordon inequality E||G|| <= sqrt(N) + sqrt(M), allowed two MC stderrs.
    const double scale = std::sqrt(static_cast<double>(p.rows)) +
                         std::sqrt(static_cast<double>(p.cols));
    const double slack = 2.0 * p.op_stderr / scale;
    os << "gaussian," << p.rows << ',' << p.cols << ",0," << p.c_sum << ',' << p.c_sum - slack
       << ',' << p.c_sum + slack << ",1," << (p.c_sum <= 1.0 + slack ? 1 : 0) << '\n';
  }
  for (const auto& p : report.briet_vidick.points) {
    // Fit-implied bound c_eps_fit * n log(n)^{k/2}; the fitted max saturates it.
    const double logn = std::log(static_cast<double>(std::max<Index>(p.n, 2)));
    const double bound = report.briet_vidick.c_eps_fit * static_cast<double>(p.n) *
                         std::pow(logn, 0.5 * report.briet_vidick.k);
    os << "bv," << p.n << ',' << report.briet_vidick.k << ",0," << p.eps_mean << ",0,0,"
       << bound << ',' << (p.eps_mean <= bound * (1.0 + 1e-12) ? 1 : 0) << '\n';
  }
  return os.str();
}

nlohmann::json concentration_json(const ConcentrationReport& report) {
  nlohmann::json bern = nlohmann::json::array();
  for (const auto& p : report.bernstein.points)
    bern.push_back({{"m", p.m},
                    {"N", p.big_n},
                    {"t", p.t},
                    {"estimate", p.estimate},
                    {"ci_lo", p.ci_lo},
                    {"ci_hi", p.ci_hi},
                    {"bound", p.bound},
                    {"pass", p.pass}});
  nlohmann::json chev = nlohmann::json::array();
  for (const auto& p : report.chevet.points)
    chev.push_back({{"m", p.m},
                    {"D", p.d},
                    {"lhs_estimate", p.lhs_estimate},
                    {"lhs_ci_hi", p.lhs_ci_hi},
                    {"rhs", p.rhs},
                    {"pass", p.pass}});
  nlohmann::json gauss = nlohmann::json::array();
  for (const auto& p : report.gaussian.points)
    gauss.push_back({{"rows", p.rows},
                     {"cols", p.cols},
                     {"op_mean", p.op_mean},
                     {"op_stderr", p.op_stderr},
                     {"tr_mean", p.tr_mean},
                     {"c_sum", p.c_sum},
                     {"c_min", p.c_min}});
  nlohmann::json bv = nlohmann::json::array();
  for (const auto& p : report.briet_vidick.points)
    bv.push_back({{"n", p.n},
                  {"eps_mean", p.eps_mean},
                  {"op_mean", p.op_mean},
                  {"eps_rate", p.eps_rate},
                  {"op_rate", p.op_rate}});
  return {{"bernstein",
           {{"points", bern},
            {"c_fit", report.bernstein.c_fit},
            {"big_c_fit", report.bernstein.big_c_fit},
            {"single_fit_covers", report.bernstein.single_fit_covers},
            {"trials", report.bernstein.trials}}},
          {"chevet",
           {{"points", chev}, {"trials", report.chevet.trials},
            {"all_pass", report.chevet.all_pass}}},
          {"gaussian",
           {{"points", gauss},
            {"c_sum_max", report.gaussian.c_sum_max},
            {"c_min_max", report.gaussian.c_min_max},
            {"min_form_flagged", report.gaussian.min_form_flagged},
            {"trials", report.gaussian.trials}}},
          {"briet_vidick",
           {{"points", bv},
            {"k", report.briet_vidick.k},
            {"c_eps_fit", report.briet_vidick.c_eps_fit},
            {"c_op_fit", report.briet_vidick.c_op_fit},
            {"trials", report.briet_vidick.trials}}},
          {"wall_seconds", report.wall_seconds}};
}

SimulateReport run_simulate(const SimulateConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SimulateReport report;
  report.config = config;

  struct GameSetup {
    GameDecomposition decomposition;
    std::vector<OutcomeTable> tables;
  };
  std::vector<GameSetup> setups(static_cast<std::size_t>(config.games));
  parallel_for(config.games, [&](Index g) {
    GaussianStream stream(config.seed, "simulate/game/" + std::to_string(g));
    const Index n =
        static_cast<Index>(std::pow(static_cast<double>(config.d), config.k) + 0.5);
    CMatrix x(n, n);
    std::uint64_t counter = 0;
    for (Index row = 0; row < n; ++row)
      for (Index col = 0; col < n; ++col) {
        x(row, col) = Complex(stream.normal(counter), stream.normal(counter + 1));
        counter += 2;
      }
    const QuantumXorGame game = game_from_hermitian(
        (x + x.adjoint()) / 2.0, std::vector<Index>(static_cast<std::size_t>(config.k), config.d));
    const EntangledStrategy strat =
        entangled_bias_lb(game, config.ancilla_dim, config.als).strategy;
    GameSetup& setup = setups[static_cast<std::size_t>(g)];
    setup.decomposition = decompose_two_question(game);
    for (const CMatrix& rho : setup.decomposition.states)
      setup.tables.push_back(outcome_distribution(strat, rho));
  });

  report.rows.resize(static_cast<std::size_t>(config.games) *
                     static_cast<std::size_t>(config.runs_per_game));
  parallel_for(static_cast<Index>(report.rows.size()), [&](Index i) {
    const int g = static_cast<int>(i) / config.runs_per_game;
    const int run = static_cast<int>(i) % config.runs_per_game;
    const std::uint64_t seed = config.seed * 1000000 + static_cast<std::uint64_t>(g) * 1000 +
                               static_cast<std::uint64_t>(run);
    SimulateRunRow& row = report.rows[static_cast<std::size_t>(i)];
    row.game = g;
    row.run = run;
    const GameSetup& setup = setups[static_cast<std::size_t>(g)];
    row.result = play_tables(setup.decomposition, setup.tables, config.rounds, seed);
  });

  std::size_t below = 0;
  for (const auto& row : report.rows)
    if (std::abs(row.result.z_score) < 4.0) ++below;
  report.z_below_4_fraction =
      report.rows.empty() ? 0.0 : static_cast<double>(below) / report.rows.size();
  report.wall_seconds = seconds_since(start);
  return report;
}

std::string simulate_csv(const SimulateReport& report) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "game,run,rounds,empirical_bias,analytic_bias,z_score\n";
  for (const auto& row : report.rows)
    os << row.game << ',' << row.run << ',' << row.result.rounds << ','
       << row.result.empirical_bias << ',' << row.result.analytic_bias << ','
       << row.result.z_score << '\n';
  return os.str();
}

nlohmann::json simulate_json(const SimulateReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows)
    rows.push_back({{"game", row.game},
                    {"run", row.run},
                    {"rounds", row.result.rounds},
                    {"empirical_bias", row.result.empirical_bias},
                    {"analytic_bias", row.result.analytic_bias},
                    {"z_score", row.result.z_score}});
  return {{"config",
           {{"k", report.config.k},
            {"d", report.config.d},
            {"games", report.config.games},
            {"runs_per_game", report.config.runs_per_game},
            {"rounds", report.config.rounds},
            {"ancilla_dim", report.config.ancilla_dim},
            {"als", als_json(report.config.als)},
            {"seed", report.config.seed}}},
          {"rows", rows},
          {"z_below_4_fraction", report.z_below_4_fraction},
          {"wall_seconds", report.wall_seconds}};
}

}  // namespace xorsep
