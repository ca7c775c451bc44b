#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coexlab/harness.hpp"

namespace {

using namespace coexlab;

struct ScenarioFlags {
  std::string scheme = "csat";
  int n = 1;
  double tau = 1.0 / 16.0;
  std::int64_t n_agg = 1;
  std::int64_t payload = 12000;
  double t_on_ms = 10.0;
  double t_off_ms = 10.0;
  double t_lte_ms = 1.0;
  double lte_rate = 135.0;
  std::string phy_file;
  bool propfair = false;

  void attach(CLI::App* cmd, bool with_off) {
    cmd->add_option("--scheme", scheme, "csat or lbe")->check(CLI::IsMember({"csat", "lbe"}));
    cmd->add_option("--n", n, "number of WiFi stations");
    cmd->add_option("--tau", tau, "per-slot transmission probability");
    cmd->add_option("--n-agg", n_agg, "aggregated MPDUs per WiFi transmission");
    cmd->add_option("--payload", payload, "payload bits per MPDU");
    cmd->add_option("--t-on-ms", t_on_ms, "LTE burst duration [ms]");
    if (with_off) {
      cmd->add_option("--t-off-ms", t_off_ms, "mean LTE off-time [ms]");
      cmd->add_flag("--propfair", propfair, "derive t_off from the proportional-fair optimum");
    }
    cmd->add_option("--t-lte-ms", t_lte_ms, "LTE subframe duration [ms]");
    cmd->add_option("--lte-rate", lte_rate, "LTE rate [Mbps]");
    cmd->add_option("--phy", phy_file, "phy profile key=value file");
  }

  Scenario scenario() const {
    Scenario sc;
    sc.scheme = scheme_from_name(scheme);
    sc.n = n;
    sc.tau = tau;
    sc.traffic.n_agg = n_agg;
    sc.traffic.payload_d = payload;
    sc.t_on = ms_to_ns(t_on_ms);
    sc.t_off_mean = t_off_ms * 1e6;
    sc.t_lte = ms_to_ns(t_lte_ms);
    sc.lte_rate = lte_rate;
    if (!phy_file.empty()) sc.phy = load_phy_profile(phy_file);
    if (propfair) sc.t_off_mean = solve_toff(sc).t_off_star_us * 1e3;
    return sc;
  }
};

int cmd_model(const ScenarioFlags& flags) {
  const Scenario sc = flags.scenario();
  const AnalyticReport report = evaluate(sc);
  std::cout << analytic_csv_header() << '\n' << analytic_csv_row(sc, report) << '\n';
  return 0;
}

int cmd_propfair(const ScenarioFlags& flags) {
  Scenario sc = flags.scenario();
  const PropFairResult result = solve_toff(sc);
  std::cout << propfair_csv_header() << '\n' << propfair_csv_row(sc, result) << '\n';
  return 0;
}

int cmd_simulate(const ScenarioFlags& flags, double horizon_s, int runs, std::uint64_t seed,
                 const std::string& out, const std::string& delays) {
  SimConfig config;
  config.scenario = flags.scenario();
  config.horizon = s_to_ns(horizon_s);
  config.seed = seed;
  const ReplicateStats stats = replicate(config, runs, max_threads(), true);
  if (!out.empty()) write_sim_runs_csv(config, stats, out);
  if (!delays.empty()) write_delay_samples(stats.pooled_delays, delays);
  std::cout << "scheme=" << scheme_name(config.scenario.scheme) << " runs=" << runs
            << " horizon_s=" << horizon_s << " wifi_mbps=" << stats.wifi_mbps.mean
            << " lte_mbps=" << stats.lte_mbps.mean << " p_lte=" << stats.p_lte.mean
            << " realized_off_ms=" << stats.realized_off_us.mean / 1e3 << '\n';
  return 0;
}

int cmd_experiment(const std::string& which, const std::string& out_dir,
                   std::optional<int> runs, std::optional<double> horizon_s,
                   std::optional<std::uint64_t> seed) {
  ExperimentSpec spec;
  if (auto builtin = builtin_spec(which)) {
    spec = *builtin;
  } else {
    spec = load_experiment_spec(which);
  }
  if (runs) spec.runs = *runs;
  if (horizon_s) spec.horizon = s_to_ns(*horizon_s);
  if (seed) spec.base_seed = *seed;

  const ExperimentOutput output = run_experiment(spec);
  for (const auto& path : write_experiment_files(output, out_dir))
    std::cout << "wrote " << path << '\n';
  int bad = 0;
  for (const auto& row : output.rows)
    if (row.status != "ok") ++bad;
  if (bad > 0) std::cout << bad << " row(s) flagged invalid; see status column\n";
  return 0;
}

int cmd_validate(const std::string& csv, double rel_tol) {
  const auto rows = read_experiment_csv(csv);
  const ValidationReport report = validate_rows(rows, rel_tol);
  for (const auto& check : report.checks) {
    std::cout << (check.ok ? "pass" : "FAIL") << "  " << check.detail;
    if (check.detail.find(':') == std::string::npos)
      std::cout << "  wifi_rel=" << check.wifi_rel << " lte_rel=" << check.lte_rel;
    std::cout << '\n';
  }
  std::cout << (report.all_ok ? "validate: all rows pass" : "validate: FAILURES") << " (rel_tol="
            << rel_tol << ", rows=" << report.checks.size() << ")\n";
  return report.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTE-U/WiFi coexistence model, proportional-fair configuration and simulator"};
  app.require_subcommand(1);

  ScenarioFlags model_flags;
  auto* model = app.add_subcommand("model", "evaluate the analytic throughput model");
  model_flags.attach(model, true);

  ScenarioFlags pf_flags;
  auto* propfair = app.add_subcommand("propfair", "proportional-fair off-time and airtimes");
  pf_flags.attach(propfair, false);

  ScenarioFlags sim_flags;
  double horizon_s = 50.0;
  int runs = 1;
  std::uint64_t seed = 1;
  std::string out_csv, delays_csv;
  auto* simulate = app.add_subcommand("simulate", "packet-level coexistence simulation");
  sim_flags.attach(simulate, true);
  simulate->add_option("--horizon-s", horizon_s, "per-run horizon [s]");
  simulate->add_option("--runs", runs, "independent replications");
  simulate->add_option("--seed", seed, "base seed");
  simulate->add_option("--out", out_csv, "per-run summary CSV path");
  simulate->add_option("--delays", delays_csv, "per-packet delay samples path (us per line)");

  std::string exp_name, exp_dir = "out";
  std::optional<int> exp_runs;
  std::optional<double> exp_horizon;
  std::optional<std::uint64_t> exp_seed;
  auto* experiment = app.add_subcommand("experiment", "run a built-in (fig2, fig3) or file-defined experiment");
  experiment->add_option("name", exp_name, "builtin name or spec file path")->required();
  experiment->add_option("--out-dir", exp_dir, "output directory");
  experiment->add_option("--runs", exp_runs, "override replication count");
  experiment->add_option("--horizon-s", exp_horizon, "override per-run horizon [s]");
  experiment->add_option("--seed", exp_seed, "override base seed");

  std::string val_csv;
  double rel_tol = 0.05;
  auto* validate = app.add_subcommand("validate", "check simulated vs analytic columns of an experiment CSV");
  validate->add_option("csv", val_csv, "experiment CSV path")->required();
  validate->add_option("--rel-tol", rel_tol, "relative tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (model->parsed()) return cmd_model(model_flags);
    if (propfair->parsed()) return cmd_propfair(pf_flags);
    if (simulate->parsed())
      return cmd_simulate(sim_flags, horizon_s, runs, seed, out_csv, delays_csv);
    if (experiment->parsed())
      return cmd_experiment(exp_name, exp_dir, exp_runs, exp_horizon, exp_seed);
    if (validate->parsed()) return cmd_validate(val_csv, rel_tol);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
