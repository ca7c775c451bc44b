#include "coexlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "coexlab/kv_file.hpp"
#include "coexlab/rng.hpp"

namespace coexlab {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

}  // namespace

void scenario_set_field(Scenario& scenario, const std::string& field, double value) {
  if (field == "n") scenario.n = static_cast<int>(value);
  else if (field == "tau") scenario.tau = value;
  else if (field == "n_agg") scenario.traffic.n_agg = static_cast<std::int64_t>(value);
  else if (field == "payload_d") scenario.traffic.payload_d = static_cast<std::int64_t>(value);
  else if (field == "t_on_ms") scenario.t_on = ms_to_ns(value);
  else if (field == "t_off_ms") scenario.t_off_mean = value * 1e6;
  else if (field == "t_lte_ms") scenario.t_lte = ms_to_ns(value);
  else if (field == "lte_rate_mbps") scenario.lte_rate = value;
  else throw std::invalid_argument("unknown scenario field '" + field + "'");
}

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("COEXLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) return std::min(hw, cap);
  }
  return hw;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  if (spec.sweep.empty()) throw std::invalid_argument("experiment: sweep must be non-empty");
  for (const auto& dim : spec.sweep)
    if (dim.values.empty())
      throw std::invalid_argument("experiment: sweep dimension '" + dim.field + "' has no values");
  if (spec.runs < 1) throw std::invalid_argument("experiment: runs must be >= 1");
  if (spec.schemes.empty()) throw std::invalid_argument("experiment: no schemes");

  const int threads = max_threads();

  ExperimentOutput output;
  output.spec = spec;

  std::size_t total_points = 1;
  for (const auto& dim : spec.sweep) total_points *= dim.values.size();

  std::uint64_t row_index = 0;
  for (std::size_t flat = 0; flat < total_points; ++flat) {
    // Decode the flat index into one value per dimension, first dim outermost.
    std::vector<std::pair<std::string, double>> point;
    {
      std::size_t rest = flat;
      std::size_t block = total_points;
      for (const auto& dim : spec.sweep) {
        block /= dim.values.size();
        const std::size_t idx = rest / block;
        rest %= block;
        point.emplace_back(dim.field, dim.values[idx]);
      }
    }

    for (Scheme scheme : spec.schemes) {
      ExperimentRow row;
      row.point = point;
      row.scenario = spec.base;
      for (const auto& [field, value] : point) scenario_set_field(row.scenario, field, value);
      row.scenario.scheme = scheme;
      const std::uint64_t row_seed = derive_seed(spec.base_seed, row_index++);

      try {
        if (spec.use_propfair) {
          const PropFairResult pf = solve_toff(row.scenario);
          row.t_off_star_ms = pf.t_off_star_us / 1e3;
          row.scenario.t_off_mean = pf.t_off_star_us * 1e3;
        } else {
          row.t_off_star_ms = std::numeric_limits<double>::quiet_NaN();
        }

        const AnalyticReport model = evaluate(row.scenario);
        row.p_lte_analytic = model.p_lte;
        row.s_wifi_analytic = model.s_wifi.empty() ? 0.0 : model.s_wifi.front();
        row.s_lte_analytic = model.s_lte;
        row.wifi_airtime = model.wifi_airtime;
        row.lte_airtime = model.lte_airtime;

        SimConfig sim;
        sim.scenario = row.scenario;
        sim.horizon = spec.horizon;
        sim.seed = row_seed;
        ReplicateStats stats = replicate(sim, spec.runs, threads, spec.collect_delays);
        row.s_wifi_sim = stats.wifi_mbps.mean;
        row.s_wifi_stderr = stats.wifi_mbps.stderr_;
        row.s_lte_sim = stats.lte_mbps.mean;
        row.s_lte_stderr = stats.lte_mbps.stderr_;
        row.p_lte_sim = stats.total_on_starts > 0
                            ? static_cast<double>(stats.total_lte_wifi_collisions) /
                                  static_cast<double>(stats.total_on_starts)
                            : std::numeric_limits<double>::quiet_NaN();
        row.realized_off_ms = stats.realized_off_us.mean / 1e3;
        row.lte_on_starts = stats.total_on_starts;
        row.lte_wifi_collisions = stats.total_lte_wifi_collisions;
        if (spec.collect_delays) row.delays = std::move(stats.pooled_delays);
      } catch (const InvalidRegimeError& e) {
        row.status = std::string("invalid_regime: ") + e.what();
      } catch (const std::invalid_argument& e) {
        row.status = std::string("invalid_config: ") + e.what();
      }
      output.rows.push_back(std::move(row));
    }
  }
  return output;
}

ValidationReport validate(const ExperimentOutput& output, double rel_tol) {
  ValidationReport report;
  report.rel_tol = rel_tol;
  for (std::size_t i = 0; i < output.rows.size(); ++i) {
    const auto& row = output.rows[i];
    RowCheck check;
    check.row = i;
    std::ostringstream label;
    label << scheme_name(row.scenario.scheme);
    for (const auto& [field, value] : row.point) label << ' ' << field << '=' << value;
    if (row.status != "ok") {
      check.ok = false;
      check.detail = label.str() + ": " + row.status;
    } else {
      check.wifi_rel = row.s_wifi_analytic != 0.0
                           ? std::abs(row.s_wifi_sim - row.s_wifi_analytic) / row.s_wifi_analytic
                           : std::abs(row.s_wifi_sim);
      check.lte_rel = row.s_lte_analytic != 0.0
                          ? std::abs(row.s_lte_sim - row.s_lte_analytic) / row.s_lte_analytic
                          : std::abs(row.s_lte_sim);
      check.ok = check.wifi_rel <= rel_tol && check.lte_rel <= rel_tol;
      check.detail = label.str();
    }
    report.all_ok = report.all_ok && check.ok;
    report.checks.push_back(std::move(check));
  }
  return report;
}

std::string experiment_csv_header() {
  return "experiment,scheme,n,tau,n_agg,payload_d,t_on_ms,t_off_ms,t_lte_ms,lte_rate_mbps,"
         "t_off_star_ms,runs,horizon_s,p_lte_analytic,s_wifi_analytic_mbps,s_lte_analytic_mbps,"
         "wifi_airtime,lte_airtime,s_wifi_sim_mbps,s_wifi_sim_stderr,s_lte_sim_mbps,"
         "s_lte_sim_stderr,p_lte_sim,realized_t_off_ms,lte_on_starts,lte_wifi_collisions,status";
}

namespace {

std::string experiment_csv_row(const ExperimentOutput& output, const ExperimentRow& row) {
  const Scenario& sc = row.scenario;
  std::ostringstream out;
  out << output.spec.name << ',' << scheme_name(sc.scheme) << ',' << sc.n << ',' << fmt(sc.tau)
      << ',' << sc.traffic.n_agg << ',' << sc.traffic.payload_d << ',' << fmt(to_ms(sc.t_on))
      << ',' << fmt(to_ms(sc.t_off_mean)) << ',' << fmt(to_ms(sc.t_lte)) << ','
      << fmt(sc.lte_rate) << ',' << fmt(row.t_off_star_ms) << ',' << output.spec.runs << ','
      << fmt(to_s(output.spec.horizon)) << ',' << fmt(row.p_lte_analytic) << ','
      << fmt(row.s_wifi_analytic) << ',' << fmt(row.s_lte_analytic) << ','
      << fmt(row.wifi_airtime) << ',' << fmt(row.lte_airtime) << ',' << fmt(row.s_wifi_sim) << ','
      << fmt(row.s_wifi_stderr) << ',' << fmt(row.s_lte_sim) << ',' << fmt(row.s_lte_stderr)
      << ',' << fmt(row.p_lte_sim) << ',' << fmt(row.realized_off_ms) << ',' << row.lte_on_starts
      << ',' << row.lte_wifi_collisions << ',' << row.status;
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

}  // namespace

void write_experiment_csv(const ExperimentOutput& output, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << experiment_csv_header() << '\n';
  for (const auto& row : output.rows) out << experiment_csv_row(output, row) << '\n';
}

std::vector<CsvRow> read_experiment_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  const auto header = split_csv_line(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error(path + ": missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_scheme = column("scheme");
  const std::size_t c_wa = column("s_wifi_analytic_mbps");
  const std::size_t c_la = column("s_lte_analytic_mbps");
  const std::size_t c_ws = column("s_wifi_sim_mbps");
  const std::size_t c_ls = column("s_lte_sim_mbps");
  const std::size_t c_status = column("status");
  const std::size_t c_n = column("n");
  const std::size_t c_nagg = column("n_agg");
  const std::size_t c_ton = column("t_on_ms");

  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error(path + ": ragged row '" + line + "'");
    CsvRow row;
    row.scheme = cells[c_scheme];
    row.s_wifi_analytic = std::stod(cells[c_wa]);
    row.s_lte_analytic = std::stod(cells[c_la]);
    row.s_wifi_sim = std::stod(cells[c_ws]);
    row.s_lte_sim = std::stod(cells[c_ls]);
    row.status = cells[c_status];
    row.label = row.scheme + " n=" + cells[c_n] + " n_agg=" + cells[c_nagg] +
                " t_on_ms=" + cells[c_ton];
    rows.push_back(std::move(row));
  }
  return rows;
}

ValidationReport validate_rows(const std::vector<CsvRow>& rows, double rel_tol) {
  ValidationReport report;
  report.rel_tol = rel_tol;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    RowCheck check;
    check.row = i;
    if (row.status != "ok") {
      check.ok = false;
      check.detail = row.label + ": " + row.status;
    } else {
      check.wifi_rel = row.s_wifi_analytic != 0.0
                           ? std::abs(row.s_wifi_sim - row.s_wifi_analytic) / row.s_wifi_analytic
                           : std::abs(row.s_wifi_sim);
      check.lte_rel = row.s_lte_analytic != 0.0
                          ? std::abs(row.s_lte_sim - row.s_lte_analytic) / row.s_lte_analytic
                          : std::abs(row.s_lte_sim);
      check.ok = check.wifi_rel <= rel_tol && check.lte_rel <= rel_tol;
      check.detail = row.label;
    }
    report.all_ok = report.all_ok && check.ok;
    report.checks.push_back(std::move(check));
  }
  return report;
}

std::vector<std::string> write_experiment_files(const ExperimentOutput& output,
                                                const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  const std::string combined = (fs::path(out_dir) / (output.spec.name + ".csv")).string();
  write_experiment_csv(output, combined);
  written.push_back(combined);

  // One panel file per (n, t_on) pair when either is swept.
  bool panels = false;
  for (const auto& dim : output.spec.sweep)
    if (dim.field == "n" || dim.field == "t_on_ms") panels = true;
  if (panels) {
    std::vector<std::pair<int, nanos_t>> seen;
    for (const auto& row : output.rows) {
      const std::pair<int, nanos_t> key{row.scenario.n, row.scenario.t_on};
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(key);
      std::ostringstream name;
      name << output.spec.name << "_n" << key.first << "_ton" << to_ms(key.second) << "ms.csv";
      const std::string path = (fs::path(out_dir) / name.str()).string();
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << experiment_csv_header() << '\n';
      for (const auto& row : output.rows)
        if (row.scenario.n == key.first && row.scenario.t_on == key.second)
          out << experiment_csv_row(output, row) << '\n';
      written.push_back(path);
    }
  }

  if (output.spec.collect_delays) {
    for (const auto& row : output.rows) {
      if (row.delays.empty()) continue;
      std::ostringstream name;
      name << output.spec.name << "_delay_cdf_" << scheme_name(row.scenario.scheme) << "_n"
           << row.scenario.n << "_ton" << to_ms(row.scenario.t_on) << "ms.csv";
      const std::string path = (fs::path(out_dir) / name.str()).string();
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << "delay_us,cdf\n";
      const nanos_t max_delay = *std::max_element(row.delays.begin(), row.delays.end());
      std::vector<nanos_t> grid;
      const int points = 1000;
      grid.reserve(points + 1);
      for (int i = 0; i <= points; ++i)
        grid.push_back(static_cast<nanos_t>(static_cast<double>(max_delay) * i / points));
      for (const auto& [delay, cdf] : delay_cdf(row.delays, grid))
        out << fmt(to_us(delay)) << ',' << fmt(cdf) << '\n';
      written.push_back(path);
    }
  }
  return written;
}

void write_sim_runs_csv(const SimConfig& config, const ReplicateStats& stats,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "run,seed,s_wifi_mbps,s_lte_mbps,p_lte,wifi_airtime,lte_airtime,realized_off_ms,"
         "successes,wifi_collisions,lte_on_starts,lte_wifi_collisions\n";
  for (std::size_t i = 0; i < stats.reports.size(); ++i) {
    const auto& r = stats.reports[i];
    std::int64_t successes = 0;
    for (auto c : r.wifi_success_count) successes += c;
    out << i << ',' << derive_seed(config.seed, i) << ',' << fmt(r.wifi_mbps_mean()) << ','
        << fmt(r.lte_mbps()) << ',' << fmt(r.empirical_p_lte()) << ',' << fmt(r.wifi_airtime())
        << ',' << fmt(r.lte_airtime()) << ',' << fmt(r.realized_off_mean_us() / 1e3) << ','
        << successes << ',' << r.wifi_collision_count << ',' << r.lte_on_count << ','
        << r.lte_wifi_collision_count << '\n';
  }
  out << "aggregate," << stats.reports.size() << ',' << fmt(stats.wifi_mbps.mean) << ','
      << fmt(stats.lte_mbps.mean) << ',' << fmt(stats.p_lte.mean) << ','
      << fmt(stats.wifi_airtime.mean) << ',' << fmt(stats.lte_airtime.mean) << ','
      << fmt(stats.realized_off_us.mean / 1e3) << ",,," << stats.total_on_starts << ','
      << stats.total_lte_wifi_collisions << '\n';
}

void write_delay_samples(const std::vector<nanos_t>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (nanos_t d : samples) out << fmt(to_us(d)) << '\n';
}

ExperimentSpec fig2_spec() {
  ExperimentSpec spec;
  spec.name = "fig2";
  spec.base = Scenario{};
  spec.base.traffic.n_agg = 1;
  spec.sweep = {{"n", {1, 3, 9}},
                {"t_on_ms", {10, 50}},
                {"n_agg", {1, 2, 4, 8, 16, 32, 64}}};
  spec.use_propfair = true;
  spec.runs = 10;
  spec.horizon = 10 * kSecond;
  spec.base_seed = 1;
  return spec;
}

ExperimentSpec fig3_spec() {
  ExperimentSpec spec;
  spec.name = "fig3";
  spec.base = Scenario{};
  spec.base.n = 1;
  spec.base.traffic.n_agg = 64;
  spec.sweep = {{"t_on_ms", {10, 50}}};
  spec.use_propfair = true;
  spec.runs = 10;
  spec.horizon = 10 * kSecond;
  spec.base_seed = 1;
  spec.collect_delays = true;
  return spec;
}

std::optional<ExperimentSpec> builtin_spec(const std::string& name) {
  if (name == "fig2") return fig2_spec();
  if (name == "fig3") return fig3_spec();
  return std::nullopt;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  const auto sections = parse_kv_file(path);
  ExperimentSpec spec;
  spec.schemes.clear();
  for (const auto& section : sections) {
    if (section.name.empty()) {
      for (const auto& [key, value] : section.values) {
        KvSection one{"", {{key, value}}};
        if (key == "name") spec.name = value;
        else if (key == "schemes") {
          std::istringstream in(value);
          std::string item;
          while (std::getline(in, item, ',')) spec.schemes.push_back(scheme_from_name(item));
        } else if (key == "use_propfair") spec.use_propfair = kv_bool(one, key);
        else if (key == "runs") spec.runs = static_cast<int>(kv_int(one, key));
        else if (key == "horizon_s") spec.horizon = s_to_ns(kv_double(one, key));
        else if (key == "base_seed") spec.base_seed = static_cast<std::uint64_t>(kv_int(one, key));
        else if (key == "collect_delays") spec.collect_delays = kv_bool(one, key);
        else throw std::runtime_error(path + ": unknown experiment key '" + key + "'");
      }
    } else if (section.name == "base") {
      for (const auto& [key, value] : section.values) {
        KvSection one{"", {{key, value}}};
        if (key == "phy") spec.base.phy = load_phy_profile(value);
        else scenario_set_field(spec.base, key, kv_double(one, key));
      }
    } else if (section.name.rfind("sweep ", 0) == 0) {
      SweepDim dim;
      dim.field = section.name.substr(6);
      const auto it = section.values.find("values");
      if (it == section.values.end())
        throw std::runtime_error(path + ": sweep section needs a 'values' key");
      dim.values = parse_double_list(it->second);
      spec.sweep.push_back(std::move(dim));
    } else {
      throw std::runtime_error(path + ": unknown section [" + section.name + "]");
    }
  }
  if (spec.schemes.empty()) spec.schemes = {Scheme::Csat, Scheme::Lbe};
  if (spec.sweep.empty())
    throw std::runtime_error(path + ": experiment needs at least one [sweep <field>] section");
  return spec;
}

}  // namespace coexlab
