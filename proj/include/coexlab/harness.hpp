#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coexlab/coex_sim.hpp"
#include "coexlab/propfair.hpp"

namespace coexlab {

// One sweep dimension: a scenario field name and the values it takes.
// Recognised fields: n, tau, n_agg, payload_d, t_on_ms, t_off_ms, t_lte_ms,
// lte_rate_mbps.
struct SweepDim {
  std::string field;
  std::vector<double> values;
};

void scenario_set_field(Scenario& scenario, const std::string& field, double value);

struct ExperimentSpec {
  std::string name = "experiment";
  Scenario base;
  std::vector<SweepDim> sweep;           // cartesian product, first dim outermost
  std::vector<Scheme> schemes = {Scheme::Csat, Scheme::Lbe};
  bool use_propfair = true;              // derive t_off from the proportional-fair optimum
  int runs = 10;
  nanos_t horizon = 10 * kSecond;
  std::uint64_t base_seed = 1;
  bool collect_delays = false;           // pool per-packet delay samples per row
};

struct ExperimentRow {
  Scenario scenario;                     // scheme and t_off resolved
  std::vector<std::pair<std::string, double>> point;  // sweep coordinates
  std::string status = "ok";             // "ok" or the error that invalidated the row

  double t_off_star_ms = 0.0;            // propfair optimum when used, else NaN

  double p_lte_analytic = 0.0;
  double s_wifi_analytic = 0.0;          // Mbps per station
  double s_lte_analytic = 0.0;
  double wifi_airtime = 0.0;
  double lte_airtime = 0.0;

  double s_wifi_sim = 0.0;
  double s_wifi_stderr = 0.0;
  double s_lte_sim = 0.0;
  double s_lte_stderr = 0.0;
  double p_lte_sim = 0.0;
  double realized_off_ms = 0.0;
  std::int64_t lte_on_starts = 0;
  std::int64_t lte_wifi_collisions = 0;

  std::vector<nanos_t> delays;           // filled when the spec collects delays
};

struct ExperimentOutput {
  ExperimentSpec spec;
  std::vector<ExperimentRow> rows;       // fixed order: sweep point outer, scheme inner
};

// Runs the full sweep: per point and scheme solves the proportional-fair
// off-time (when requested), evaluates the analytic model and replicated
// simulations, and emits one row. Invalid-regime rows are kept with their
// error recorded instead of aborting the sweep.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

struct RowCheck {
  std::size_t row = 0;
  bool ok = false;
  double wifi_rel = 0.0;
  double lte_rel = 0.0;
  std::string detail;
};

struct ValidationReport {
  bool all_ok = true;
  double rel_tol = 0.0;
  std::vector<RowCheck> checks;
};

// Flags rows whose simulated WiFi or LTE throughput deviates from the
// analytic value by more than rel_tol (relative). Rows with a non-ok status
// fail outright.
ValidationReport validate(const ExperimentOutput& output, double rel_tol);

// CSV round trip for experiment outputs (stable documented columns).
std::string experiment_csv_header();
void write_experiment_csv(const ExperimentOutput& output, const std::string& path);

// Minimal row view used when validating a CSV produced earlier.
struct CsvRow {
  std::string scheme;
  double s_wifi_analytic = 0.0;
  double s_lte_analytic = 0.0;
  double s_wifi_sim = 0.0;
  double s_lte_sim = 0.0;
  std::string status;
  std::string label;
};
std::vector<CsvRow> read_experiment_csv(const std::string& path);
ValidationReport validate_rows(const std::vector<CsvRow>& rows, double rel_tol);

// fig2 writes one combined CSV plus one file per (n, t_on) panel; fig3 also
// writes one delay-CDF CSV per row. Returns the paths written.
std::vector<std::string> write_experiment_files(const ExperimentOutput& output,
                                                const std::string& out_dir);

// Per-run summary rows plus an aggregate row for one simulate invocation.
void write_sim_runs_csv(const SimConfig& config, const ReplicateStats& stats,
                        const std::string& path);
// One delay sample per line, in us.
void write_delay_samples(const std::vector<nanos_t>& samples, const std::string& path);

// Built-in experiment specs.
ExperimentSpec fig2_spec();
ExperimentSpec fig3_spec();
std::optional<ExperimentSpec> builtin_spec(const std::string& name);

// Experiment spec from a key=value file with [base] and [sweep <field>]
// sections (see README for the format).
ExperimentSpec load_experiment_spec(const std::string& path);

// Parallelism cap: COEXLAB_THREADS when set (>=1), else hardware concurrency.
int max_threads();

}  // namespace coexlab
