// Command line front end: instance generation, single-instance bounds, dense
// game analysis, parameter scans, concentration checks, round simulation and
// certificate replay. Summaries go to stdout as JSON; full reports (including
// certificates) and CSV tables are written to files on request.

#include <CLI/CLI.hpp>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "xorsep/experiments.hpp"
#include "xorsep/linalg.hpp"
#include "xorsep/serialization.hpp"

namespace {

using namespace xorsep;

void emit(const nlohmann::json& j) { std::cout << j.dump(2) << '\n'; }

void add_als_flags(CLI::App* cmd, AlsOptions& als) {
  cmd->add_option("--restarts", als.restarts, "ALS / see-saw restarts");
  cmd->add_option("--max-iters", als.max_iterations, "maximum sweeps per restart");
  cmd->add_option("--tol", als.tol, "relative convergence tolerance");
}

nlohmann::json summary_row(const ScanRow& r) {
  return {{"k", r.k},
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
          {"tau_tries", r.tau_tries}};
}

nlohmann::json scan_summary(const ScanReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ScanRow& r : report.rows) rows.push_back(summary_row(r));
  return {{"rows", rows}, {"wall_seconds", report.wall_seconds}};
}

ScanRow row_from_json(const nlohmann::json& j) {
  ScanRow r;
  r.k = j.at("k").get<int>();
  r.m = j.at("m").get<Index>();
  r.d = j.at("D").get<Index>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.z_fro = j.at("z_fro").get<double>();
  from_json(j.at("min_cert"), r.min_cert);
  from_json(j.at("eps_cert"), r.eps_cert);
  return r;
}

ScanConfig config_from_json(const nlohmann::json& j) {
  ScanConfig c;
  c.k = j.at("k").get<int>();
  c.ms = j.at("ms").get<std::vector<Index>>();
  c.ds = j.at("ds").get<std::vector<Index>>();
  c.seed_count = j.at("seed_count").get<int>();
  c.seed_base = j.at("seed_base").get<std::uint64_t>();
  c.ancilla_dim = j.at("ancilla_dim").get<Index>();
  c.als.restarts = j.at("als").at("restarts").get<int>();
  c.als.max_iterations = j.at("als").at("max_iterations").get<int>();
  c.als.tol = j.at("als").at("tol").get<double>();
  c.als.seed = j.at("als").at("seed").get<std::uint64_t>();
  c.tau_max_tries = j.at("tau_max_tries").get<int>();
  c.dense_cutoff = j.at("dense_cutoff").get<Index>();
  c.matrix_free = j.at("matrix_free").get<bool>();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random multiplayer quantum XOR games: bounds, scans, simulation"};
  app.require_subcommand(1);

  // generate: sample an instance, report tau acceptance, optionally dump the
  // dense hermitized game element.
  InstanceParams gen_params;
  int gen_tau_tries = 16;
  std::string gen_dense_out;
  auto* generate = app.add_subcommand("generate", "sample an instance, write manifests");
  generate->add_option("--k", gen_params.k, "players");
  generate->add_option("--m", gen_params.m, "block index range");
  generate->add_option("--D", gen_params.D, "raw local dimension");
  generate->add_option("--seed", gen_params.seed, "instance seed");
  generate->add_option("--tau-tries", gen_tau_tries, "tau resampling budget");
  generate->add_option("--dense-out", gen_dense_out,
                       "write the dense hermitized game element (binary) here");
  generate->callback([&] {
    const RawInstance inst = sample_f_blocks(gen_params);
    const TauAcceptance tau = resample_good_tau(
        gen_params.m, gen_params.k, gen_params.seed,
        default_tau_thresholds(gen_params.m, gen_params.k), gen_tau_tries);
    nlohmann::json out{{"instance", instance_manifest(inst.params)},
                       {"tau", tau_manifest(tau.sample)},
                       {"tau_accepted", tau.accepted},
                       {"tau_tries", tau.tries},
                       {"tau_eps_estimate", tau.eps_estimate},
                       {"tau_op_norm", tau.op_norm}};
    if (!gen_dense_out.empty()) {
      const ExplicitGameElement element = build_explicit_game_element(inst, tau.sample);
      write_matrix_binary(gen_dense_out, element.matrix);
      out["dense_out"] = gen_dense_out;
      out["rows"] = element.matrix.rows();
      out["trace_norm_raw"] = element.trace_norm;
    }
    emit(out);
  });

  // norms: the full bound pipeline on one instance (a one-point scan).
  ScanConfig norms_config;
  norms_config.als = {6, 150, 1e-7, 0};
  Index norms_m = 2, norms_d = 8;
  std::uint64_t norms_seed = 1;
  std::string norms_json;
  auto* norms = app.add_subcommand("norms", "bound pipeline for a single instance");
  norms->add_option("--k", norms_config.k, "players");
  norms->add_option("--m", norms_m, "block index range");
  norms->add_option("--D", norms_d, "raw local dimension");
  norms->add_option("--seed", norms_seed, "instance seed");
  norms->add_option("--ancilla-dim", norms_config.ancilla_dim, "see-saw ancilla dimension");
  norms->add_option("--tau-max-tries", norms_config.tau_max_tries, "tau resampling budget");
  norms->add_option("--dense-cutoff", norms_config.dense_cutoff,
                    "largest total dimension that is densified");
  norms->add_flag("--matrix-free", norms_config.matrix_free, "never densify");
  add_als_flags(norms, norms_config.als);
  norms->add_option("--json", norms_json, "write the full report (with certificates) here");
  norms->callback([&] {
    norms_config.ms = {norms_m};
    norms_config.ds = {norms_d};
    norms_config.seed_count = 1;
    norms_config.seed_base = norms_seed;
    const ScanReport report = run_scan(norms_config);
    if (!norms_json.empty()) write_text_file(norms_json, scan_json(report).dump(2) + "\n");
    emit(scan_summary(report));
  });

  // bias: dense-game analysis through the games interface.
  InstanceParams bias_params;
  Index bias_ancilla = 2;
  AlsOptions bias_als = {6, 150, 1e-7, 0};
  auto* bias = app.add_subcommand("bias", "dense game: strategies and bias bounds");
  bias->add_option("--k", bias_params.k, "players");
  bias->add_option("--m", bias_params.m, "block index range");
  bias->add_option("--D", bias_params.D, "raw local dimension");
  bias->add_option("--seed", bias_params.seed, "instance seed");
  bias->add_option("--ancilla-dim", bias_ancilla, "see-saw ancilla dimension");
  add_als_flags(bias, bias_als);
  bias->callback([&] {
    const RawInstance inst = sample_f_blocks(bias_params);
    const TauAcceptance tau = resample_good_tau(
        bias_params.m, bias_params.k, bias_params.seed,
        default_tau_thresholds(bias_params.m, bias_params.k), 16, bias_als);
    const ExplicitGameElement element = build_explicit_game_element(inst, tau.sample);
    const QuantumXorGame game = game_from_hermitian(
        element.matrix,
        std::vector<Index>(static_cast<std::size_t>(bias_params.k), 2 * bias_params.D));
    const EntangledBiasResult ent = entangled_bias_lb(game, bias_ancilla, bias_als);
    const ProductBiasResult prod = product_bias_lb(game, bias_als);
    const SepBiasBounds sep = sep_bias_ub(game, bias_als);
    emit({{"k", bias_params.k},
          {"m", bias_params.m},
          {"D", bias_params.D},
          {"seed", bias_params.seed},
          {"trace_norm_raw", element.trace_norm},
          {"entangled_bias_lb", ent.estimate.value},
          {"strategy_bias", entangled_bias_value(game, ent.strategy)},
          {"product_bias_lb", prod.estimate.value},
          {"sep_bias_ub_cert", sep.certified.value},
          {"sep_bias_ub_heur", sep.heuristic.value},
          {"tau_accepted", tau.accepted}});
  });

  // scan / control-k2
  ScanConfig scan_config;
  scan_config.als = {6, 150, 1e-7, 0};
  std::string scan_csv_path, scan_json_path;
  auto* scan = app.add_subcommand("scan", "parameter scan over (m, D, seed)");
  scan->add_option("--k", scan_config.k, "players");
  scan->add_option("--ms", scan_config.ms, "block ranges")->delimiter(',');
  scan->add_option("--ds", scan_config.ds, "raw local dimensions")->delimiter(',');
  scan->add_option("--seeds", scan_config.seed_count, "seeds per point");
  scan->add_option("--seed-base", scan_config.seed_base, "first seed");
  scan->add_option("--ancilla-dim", scan_config.ancilla_dim, "see-saw ancilla dimension");
  scan->add_option("--tau-max-tries", scan_config.tau_max_tries, "tau resampling budget");
  scan->add_option("--dense-cutoff", scan_config.dense_cutoff,
                   "largest total dimension that is densified");
  scan->add_flag("--matrix-free", scan_config.matrix_free, "never densify");
  add_als_flags(scan, scan_config.als);
  scan->add_option("--csv", scan_csv_path, "write the ratio table here");
  scan->add_option("--json", scan_json_path, "write the full report here");
  scan->callback([&] {
    const ScanReport report = run_scan(scan_config);
    if (!scan_csv_path.empty()) write_text_file(scan_csv_path, scan_csv(report));
    if (!scan_json_path.empty()) write_text_file(scan_json_path, scan_json(report).dump(2) + "\n");
    emit(scan_summary(report));
  });

  ScanConfig control_config;
  control_config.als = {6, 150, 1e-7, 0};
  control_config.ms = {2, 3, 4};
  control_config.ds = {16};
  std::string control_csv_path, control_json_path;
  auto* control = app.add_subcommand("control-k2", "two-player control scan (exact anchor)");
  control->add_option("--ms", control_config.ms, "block ranges")->delimiter(',');
  control->add_option("--ds", control_config.ds, "raw local dimensions")->delimiter(',');
  control->add_option("--seeds", control_config.seed_count, "seeds per point");
  control->add_option("--seed-base", control_config.seed_base, "first seed");
  control->add_option("--ancilla-dim", control_config.ancilla_dim, "see-saw ancilla dimension");
  control->add_option("--tau-max-tries", control_config.tau_max_tries, "tau resampling budget");
  control->add_option("--dense-cutoff", control_config.dense_cutoff,
                      "largest total dimension that is densified");
  control->add_flag("--matrix-free", control_config.matrix_free, "never densify");
  add_als_flags(control, control_config.als);
  control->add_option("--csv", control_csv_path, "write the ratio table here");
  control->add_option("--json", control_json_path, "write the full report here");
  control->callback([&] {
    const ControlReport report = run_control_k2(control_config);
    if (!control_csv_path.empty()) write_text_file(control_csv_path, control_csv(report));
    if (!control_json_path.empty())
      write_text_file(control_json_path, control_json(report).dump(2) + "\n");
    nlohmann::json rows = nlohmann::json::array();
    for (const ControlRow& r : report.rows) {
      nlohmann::json j = summary_row(r.scan);
      j["l2_injective_exact"] = r.l2_injective_exact;
      rows.push_back(std::move(j));
    }
    emit({{"rows", rows}, {"wall_seconds", report.wall_seconds}});
  });

  // replay: audit the certificates stored in a scan report file.
  std::string replay_path;
  double replay_tol = 1e-10;
  auto* replay = app.add_subcommand("replay", "re-evaluate certificates from a scan JSON");
  replay->add_option("file", replay_path, "scan report written by --json")->required();
  replay->add_option("--tol", replay_tol, "deviation to tolerate");
  replay->callback([&] {
    const nlohmann::json report = nlohmann::json::parse(read_text_file(replay_path));
    const ScanConfig config = config_from_json(report.at("config"));
    nlohmann::json rows = nlohmann::json::array();
    double max_min_dev = 0.0, max_eps_dev = 0.0;
    for (const auto& jrow : report.at("rows")) {
      const ScanRow row = row_from_json(jrow);
      const ReplayCheck check = replay_row(config, row);
      const double min_dev = std::abs(check.min_replay - check.min_stored);
      const double eps_dev = std::abs(check.eps_replay - check.eps_stored);
      max_min_dev = std::max(max_min_dev, min_dev);
      max_eps_dev = std::max(max_eps_dev, eps_dev);
      rows.push_back({{"m", row.m},
                      {"D", row.d},
                      {"seed", row.seed},
                      {"min_dev", min_dev},
                      {"eps_dev", eps_dev}});
    }
    emit({{"rows", rows},
          {"max_min_dev", max_min_dev},
          {"max_eps_dev", max_eps_dev},
          {"pass", max_min_dev <= replay_tol && max_eps_dev <= replay_tol}});
  });

  // calibrate-tau: refit the shipped (c_eps, c_op) threshold constants.
  std::vector<Index> cal_ns = {2, 3};
  int cal_k = 3, cal_trials = 200;
  std::uint64_t cal_seed = 7;
  AlsOptions cal_als = {8, 200, 1e-8, 0};
  auto* cal = app.add_subcommand("calibrate-tau", "refit tau acceptance constants");
  cal->add_option("--ns", cal_ns, "block ranges to pool")->delimiter(',');
  cal->add_option("--k", cal_k, "players");
  cal->add_option("--trials", cal_trials, "draws per n");
  cal->add_option("--seed", cal_seed, "master seed");
  add_als_flags(cal, cal_als);
  cal->callback([&] {
    const auto [c_eps, c_op] = calibrate_tau_constants(cal_ns, cal_k, cal_trials, cal_seed, cal_als);
    nlohmann::json thresholds = nlohmann::json::array();
    for (Index n : cal_ns) {
      const TauThresholds th = tau_thresholds_from_constants(n, cal_k, c_eps, c_op);
      thresholds.push_back({{"n", n}, {"eps_ub", th.eps_ub}, {"op_lb", th.op_lb}});
    }
    emit({{"c_eps", c_eps}, {"c_op", c_op}, {"thresholds", thresholds}});
  });

  // concentration
  ConcentrationConfig conc_config;
  std::string conc_csv_path, conc_json_path;
  auto* conc = app.add_subcommand("concentration", "Monte Carlo concentration checks");
  conc->add_option("--bernstein-trials", conc_config.bernstein_trials, "Bernstein tail trials");
  conc->add_option("--chevet-trials", conc_config.chevet_trials, "Chevet trials");
  conc->add_option("--gaussian-trials", conc_config.gaussian_trials, "Gaussian norm trials");
  conc->add_option("--bv-trials", conc_config.bv_trials, "tau scaling trials");
  conc->add_option("--seed", conc_config.seed, "master seed");
  conc->add_option("--csv", conc_csv_path, "write the point table here");
  conc->add_option("--json", conc_json_path, "write the full report here");
  conc->callback([&] {
    const ConcentrationReport report = run_concentration(conc_config);
    if (!conc_csv_path.empty()) write_text_file(conc_csv_path, concentration_csv(report));
    const nlohmann::json j = concentration_json(report);
    if (!conc_json_path.empty()) write_text_file(conc_json_path, j.dump(2) + "\n");
    emit(j);
  });

  // simulate
  SimulateConfig sim_config;
  std::string sim_csv_path, sim_json_path;
  auto* sim = app.add_subcommand("simulate", "round-by-round play against analytic bias");
  sim->add_option("--k", sim_config.k, "players");
  sim->add_option("--d", sim_config.d, "game local dimension");
  sim->add_option("--games", sim_config.games, "number of games");
  sim->add_option("--runs-per-game", sim_config.runs_per_game, "independent runs per game");
  sim->add_option("--rounds", sim_config.rounds, "rounds per run");
  sim->add_option("--ancilla-dim", sim_config.ancilla_dim, "see-saw ancilla dimension");
  sim->add_option("--seed", sim_config.seed, "master seed");
  sim->add_option("--csv", sim_csv_path, "write the per-run table here");
  sim->add_option("--json", sim_json_path, "write the full report here");
  sim->callback([&] {
    const SimulateReport report = run_simulate(sim_config);
    if (!sim_csv_path.empty()) write_text_file(sim_csv_path, simulate_csv(report));
    const nlohmann::json j = simulate_json(report);
    if (!sim_json_path.empty()) write_text_file(sim_json_path, j.dump(2) + "\n");
    emit({{"z_below_4_fraction", report.z_below_4_fraction},
          {"runs", report.rows.size()},
          {"wall_seconds", report.wall_seconds}});
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
