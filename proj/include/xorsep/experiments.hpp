#pragma once

#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xorsep/auerbach.hpp"
#include "xorsep/concentration.hpp"
#include "xorsep/ensembles.hpp"
#include "xorsep/games.hpp"
#include "xorsep/norms.hpp"
#include "xorsep/simulator.hpp"
#include "xorsep/types.hpp"

namespace xorsep {

// Worker count: XORSEP_THREADS if set, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n) on worker_count() threads. Exceptions propagate.
void parallel_for(Index n, const std::function<void(Index)>& fn);

struct ScanConfig {
  int k = 3;
  std::vector<Index> ms = {2, 3};
  std::vector<Index> ds = {8, 16};
  int seed_count = 20;
  std::uint64_t seed_base = 1;
  Index ancilla_dim = 2;
  AlsOptions als = {};
  int tau_max_tries = 16;
  // Above this total hermitized dimension the game is never densified: trace
  // norms switch to certified bounds and dense-only diagnostics are skipped.
  Index dense_cutoff = 1024;
  bool matrix_free = false;  // force the structured path even below the cap
};

// One scan point. Every iterative solver runs on z~ / ||z~||_F; certificates,
// traces and the *_raw diagnostics are stored at that scale, which keeps fp
// headroom uniform across instances. Ratios are normalization-free (the trace
// norm cancels in beta*/beta_SEP), and the bias columns divide by trace-norm
// bounds of the same normalized element, so every reported column is
// scale-correct: exact when dense, certified-direction otherwise.
struct ScanRow {
  int k = 0;
  Index m = 0, d = 0;
  std::uint64_t seed = 0;
  double beta_star_lb = 0.0;
  double sep_ub_cert = 0.0;
  double sep_ub_heur = 0.0;
  double ratio_cert = 0.0;
  double ratio_heur = 0.0;
  // diagnostics (report JSON only, not in the CSV schema)
  double min_lb_raw = 0.0;  // see-saw value on z~ / ||z~||_F
  double eps_lb_raw = 0.0;
  double eps_ub_raw = 0.0;
  double product_lb_raw = 0.0;
  double trace_norm_lb = 0.0, trace_norm_ub = 0.0;
  double z_fro = 0.0;  // ||z~||_F, audit anchor for the stored scale
  bool dense = false;
  bool tau_accepted = false;
  int tau_tries = 0;
  MinNormCertificate min_cert;
  EpsCertificate eps_cert;
  std::vector<double> min_trace, eps_trace, product_trace;
};

struct ScanReport {
  ScanConfig config;
  std::vector<ScanRow> rows;
  double wall_seconds = 0.0;
};

ScanReport run_scan(const ScanConfig& config);

// k = 2 control: same pipeline at k = 2 plus the exact l2-injective norm of
// z~ (an SVD at two factors), the computable exact anchor at this order.
struct ControlRow {
  ScanRow scan;
  double l2_injective_exact = 0.0;
};

struct ControlReport {
  ScanConfig config;
  std::vector<ControlRow> rows;
  double wall_seconds = 0.0;
};

ControlReport run_control_k2(ScanConfig config);  // config.k forced to 2

std::string scan_csv(const ScanReport& report);
std::string control_csv(const ControlReport& report);
nlohmann::json scan_json(const ScanReport& report);
nlohmann::json control_json(const ControlReport& report);

// Rebuilds z~ for a row and replays both certificates; used by the
// acceptance suite and exposed for external audits.
struct ReplayCheck {
  double min_replay = 0.0, min_stored = 0.0;
  double eps_replay = 0.0, eps_stored = 0.0;
};
ReplayCheck replay_row(const ScanConfig& config, const ScanRow& row);
KronTermSum rebuild_hermitized_z(const ScanConfig& config, const ScanRow& row);

struct ConcentrationConfig {
  std::vector<int> bernstein_ms = {2, 4};
  std::vector<int> bernstein_ns = {1000, 10000};
  std::vector<double> bernstein_ts = {0.05, 0.1, 0.2};
  int bernstein_trials = 10000;
  std::vector<Index> chevet_ms = {1, 2, 3};
  std::vector<Index> chevet_ds = {4, 8, 16};
  int chevet_trials = 40;
  std::vector<std::pair<int, int>> gaussian_shapes = {{50, 50}, {200, 200}, {50, 400}};
  int gaussian_trials = 50;
  std::vector<Index> bv_ns = {2, 3, 4};
  int bv_k = 3;
  int bv_trials = 40;
  std::uint64_t seed = 2;
};

struct ConcentrationReport {
  BernsteinReport bernstein;
  ChevetReport chevet;
  GaussianScalingReport gaussian;
  BrietVidickReport briet_vidick;
  double wall_seconds = 0.0;
};

ConcentrationReport run_concentration(const ConcentrationConfig& config);
std::string concentration_csv(const ConcentrationReport& report);
nlohmann::json concentration_json(const ConcentrationReport& report);

struct SimulateConfig {
  int k = 3;
  Index d = 4;            // game local dimension
  int games = 5;
  int runs_per_game = 20;
  std::uint64_t rounds = 100000;
  Index ancilla_dim = 2;
  AlsOptions als = {8, 300, 1e-9, 0};
  std::uint64_t seed = 3;
};

struct SimulateRunRow {
  int game = 0;
  int run = 0;
  PlayResult result;
};

struct SimulateReport {
  SimulateConfig config;
  std::vector<SimulateRunRow> rows;
  double z_below_4_fraction = 0.0;
  double wall_seconds = 0.0;
};

SimulateReport run_simulate(const SimulateConfig& config);
std::string simulate_csv(const SimulateReport& report);
nlohmann::json simulate_json(const SimulateReport& report);

}  // namespace xorsep
