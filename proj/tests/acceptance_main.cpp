// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Simulation-backed criteria run at desk scale (10 runs x 10 s unless noted).

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "coexlab/harness.hpp"
#include "coexlab/rng.hpp"

using namespace coexlab;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s  (%s)\n", ok ? "PASS" : "FAIL", index, name.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

Scenario scenario_for(Scheme scheme, int n, std::int64_t n_agg, double t_on_ms) {
  Scenario sc;
  sc.scheme = scheme;
  sc.n = n;
  sc.tau = 1.0 / 16.0;
  sc.traffic.n_agg = n_agg;
  sc.t_on = ms_to_ns(t_on_ms);
  return sc;
}

// ---- criterion 1: proportional-fair airtime ----
void criterion_airtime() {
  bool ok = true;
  double worst_air = 0.0, worst_kkt = 0.0;
  for (const Scheme scheme : {Scheme::Csat, Scheme::Lbe}) {
    for (const int n : {1, 3, 9}) {
      const Scenario sc = scenario_for(scheme, n, 8, 10.0);
      const PropFairResult r = solve_toff(sc);
      const double lte_err = std::abs(r.lte_airtime - 1.0 / (n + 1));
      const double wifi_err = std::abs(r.wifi_airtime - static_cast<double>(n) / (n + 1));
      worst_air = std::max({worst_air, lte_err, wifi_err});
      worst_kkt = std::max(worst_kkt, r.kkt_residual);
      ok = ok && lte_err <= 1e-9 && wifi_err <= 1e-9 && r.kkt_residual <= 1e-12;
    }
  }
  report(1, "proportional-fair airtime 1/(n+1) vs n/(n+1)", ok,
         "worst airtime err " + fmt(worst_air) + ", worst kkt " + fmt(worst_kkt));
}

// ---- criteria 2/3/6 share one fig2 sweep ----
struct Fig2Data {
  ExperimentOutput output;
};

// Full Fig.2 protocol: 100 runs x 50 s. The desk scale (10 runs x 10 s)
// leaves ~6% standard error on the LTE throughput of the t_on=50ms, n=9
// rows (only ~20 bursts per run), which cannot support a 5% tolerance; at
// the full protocol the worst-row standard error is below 1%.
Fig2Data run_fig2() {
  ExperimentSpec spec = fig2_spec();
  spec.runs = 100;
  spec.horizon = 50 * kSecond;
  spec.base_seed = 20260809;
  Fig2Data data;
  data.output = run_experiment(spec);
  return data;
}

void criterion_fairness_equivalence(const Fig2Data& data) {
  // Rows come in (csat, lbe) pairs per sweep point.
  bool ok = true;
  double worst_analytic = 0.0, worst_sim = 0.0;
  for (std::size_t i = 0; i + 1 < data.output.rows.size(); i += 2) {
    const auto& csat = data.output.rows[i];
    const auto& lbe = data.output.rows[i + 1];
    if (csat.status != "ok" || lbe.status != "ok") {
      ok = false;
      continue;
    }
    const double rel_analytic =
        std::abs(csat.s_wifi_analytic - lbe.s_wifi_analytic) / lbe.s_wifi_analytic;
    const double rel_sim = std::abs(csat.s_wifi_sim - lbe.s_wifi_sim) / lbe.s_wifi_sim;
    worst_analytic = std::max(worst_analytic, rel_analytic);
    worst_sim = std::max(worst_sim, rel_sim);
    ok = ok && rel_analytic <= 1e-9 && rel_sim <= 0.05;
  }
  report(2, "wifi throughput equal across schemes at the optimum", ok,
         "worst analytic rel " + fmt(worst_analytic) + ", worst sim rel " + fmt(worst_sim) +
             " (tol 5%, 100 runs x 50 s)");
}

void criterion_model_vs_sim(const Fig2Data& data) {
  const ValidationReport validation = validate(data.output, 0.05);
  double worst = 0.0;
  std::string worst_row;
  for (const auto& check : validation.checks) {
    const double rel = std::max(check.wifi_rel, check.lte_rel);
    if (rel > worst) {
      worst = rel;
      worst_row = check.detail;
    }
  }
  report(3, "fig2 simulated throughput within 5% of the model", validation.all_ok,
         "worst rel " + fmt(worst) + " at [" + worst_row + "], rows " +
             std::to_string(validation.checks.size()));
}

void criterion_csat_penalty(const Fig2Data& data) {
  // Index rows by (n, t_on_ms, n_agg, scheme).
  std::map<std::tuple<int, double, std::int64_t, int>, const ExperimentRow*> rows;
  for (const auto& row : data.output.rows)
    rows[{row.scenario.n, to_ms(row.scenario.t_on), row.scenario.traffic.n_agg,
          row.scenario.scheme == Scheme::Csat ? 0 : 1}] = &row;
  bool ok = true;
  std::ostringstream detail;
  for (const int n : {1, 3, 9}) {
    const auto* csat10 = rows[{n, 10.0, 64, 0}];
    const auto* lbe10 = rows[{n, 10.0, 64, 1}];
    const auto* csat50 = rows[{n, 50.0, 64, 0}];
    const auto* lbe50 = rows[{n, 50.0, 64, 1}];
    const bool below = csat10->s_lte_sim < lbe10->s_lte_sim;
    const double gap10 = (lbe10->s_lte_sim - csat10->s_lte_sim) / lbe10->s_lte_sim;
    const double gap50 = (lbe50->s_lte_sim - csat50->s_lte_sim) / lbe50->s_lte_sim;
    ok = ok && below && gap50 < gap10;
    detail << "n=" << n << " gap10=" << fmt(gap10) << " gap50=" << fmt(gap50) << ' ';
  }
  report(6, "csat lte penalty at t_on=10ms shrinking at 50ms", ok, detail.str());
}

// ---- criterion 4: pasta validation ----
void criterion_pasta() {
  bool ok = true;
  std::ostringstream detail;
  {
    SimConfig config;
    config.scenario = scenario_for(Scheme::Csat, 2, 1, 1.0);
    config.scenario.t_off_mean = 30 * kMilli;
    config.horizon = 50 * kSecond;
    config.seed = 41;
    const ReplicateStats stats = replicate(config, 10);
    const SlotStats slots = slot_stats(config.scenario);
    const double p = p_lte_csat(slots, config.scenario.phy, config.scenario.traffic);
    const double n = static_cast<double>(stats.total_on_starts);
    const double hat = static_cast<double>(stats.total_lte_wifi_collisions) / n;
    const double se = std::sqrt(p * (1 - p) / n);
    ok = ok && stats.total_on_starts >= 10000 && std::abs(hat - p) <= 3 * se;
    detail << "csat n_starts=" << stats.total_on_starts << " p_hat=" << fmt(hat)
           << " p=" << fmt(p) << " |diff|/se=" << fmt(std::abs(hat - p) / se) << "; ";
  }
  {
    SimConfig config;
    config.scenario = scenario_for(Scheme::Lbe, 3, 8, 2.0);
    config.scenario.t_off_mean = 8 * kMilli;
    config.horizon = 25 * kSecond;
    config.seed = 43;
    const ReplicateStats stats = replicate(config, 5);
    const double p = p_lte_lbe(slot_stats(config.scenario));
    const double n = static_cast<double>(stats.total_on_starts);
    const double hat = static_cast<double>(stats.total_lte_wifi_collisions) / n;
    const double se = std::sqrt(p * (1 - p) / n);
    ok = ok && stats.total_on_starts >= 10000 && std::abs(hat - p) <= 3 * se;
    detail << "lbe n_starts=" << stats.total_on_starts << " p_hat=" << fmt(hat)
           << " p=" << fmt(p) << " |diff|/se=" << fmt(std::abs(hat - p) / se);
  }
  report(4, "empirical lte/wifi overlap probability within 3 se", ok, detail.str());
}

// ---- criterion 5: delay distribution ----
void criterion_delay() {
  struct DelayPoint {
    double t_on_ms;
    double target;
    double tol;
    double fraction = 0.0;
    double mean_us = 0.0;
  };
  DelayPoint points[] = {{10.0, 0.73, 0.05}, {50.0, 0.94, 0.03}};
  bool ok = true;
  std::ostringstream detail;
  for (auto& point : points) {
    SimConfig config;
    config.scenario = scenario_for(Scheme::Csat, 1, 64, point.t_on_ms);
    config.scenario.t_off_mean = solve_toff(config.scenario).t_off_star_us * 1e3;
    config.horizon = 50 * kSecond;
    config.seed = 47;
    const ReplicateStats stats = replicate(config, 100, 1, true);
    point.fraction =
        delay_fraction_le(stats.pooled_delays, ms_to_ns(point.t_on_ms));
    double sum = 0.0;
    for (nanos_t d : stats.pooled_delays) sum += to_us(d);
    point.mean_us = sum / static_cast<double>(stats.pooled_delays.size());
    ok = ok && std::abs(point.fraction - point.target) <= point.tol;
    detail << "t_on=" << point.t_on_ms << "ms frac<=t_on " << fmt(point.fraction)
           << " (target " << fmt(point.target) << "+-" << fmt(point.tol) << ") mean "
           << fmt(point.mean_us) << "us; ";
  }
  const bool mean_falls = points[1].mean_us < points[0].mean_us;
  ok = ok && mean_falls;
  detail << (mean_falls ? "mean falls" : "mean does not fall");
  report(5, "delay cdf fractions at t_on and falling mean (csat)", ok, detail.str());
}

// ---- criterion 7: property suites ----
void criterion_properties() {
  bool ok = true;
  std::ostringstream detail;

  // determinism: bit-identical counters across reruns
  for (const Scheme scheme : {Scheme::Csat, Scheme::Lbe}) {
    SimConfig config;
    config.scenario = scenario_for(scheme, 3, 8, 10.0);
    config.horizon = 2 * kSecond;
    config.seed = 53;
    const SimReport a = run(config);
    const SimReport b = run(config);
    const bool same = a.wifi_bits == b.wifi_bits && a.lte_bits == b.lte_bits &&
                      a.delay_samples == b.delay_samples &&
                      a.lte_on_count == b.lte_on_count;
    ok = ok && same;
    // time conservation is asserted inside run(); double-check here
    const bool conserved =
        a.idle_time + a.wifi_busy_time + a.lte_on_time + a.truncated_partial_time ==
        a.horizon;
    ok = ok && conserved;
    if (!same || !conserved) detail << scheme_name(scheme) << " determinism/partition broke; ";
  }
  detail << "determinism+partition ok; ";

  // lte-off baseline equals the slotted model within 3 se
  {
    SimConfig config;
    config.scenario = scenario_for(Scheme::Csat, 3, 4, 10.0);
    config.lte_enabled = false;
    config.horizon = 5 * kSecond;
    config.seed = 59;
    const ReplicateStats stats = replicate(config, 10);
    const SlotStats slots = slot_stats(config.scenario);
    const double expected = slots.p_succ.front() / slots.mean_slot_us *
                            static_cast<double>(config.scenario.traffic.delivered_bits());
    const bool match = std::abs(stats.wifi_mbps.mean - expected) <= 3 * stats.wifi_mbps.stderr_;
    ok = ok && match;
    detail << "baseline " << fmt(stats.wifi_mbps.mean) << " vs " << fmt(expected) << "; ";
  }

  // slot stats against exhaustive enumeration, n <= 4
  {
    double worst = 0.0;
    SplitMix64 rng(61);
    const Scenario base = scenario_for(Scheme::Csat, 1, 1, 10.0);
    for (int n = 1; n <= 4; ++n) {
      std::vector<double> taus;
      for (int j = 0; j < n; ++j) taus.push_back(0.02 + 0.5 * rng.next_unit());
      const SlotStats stats = slot_stats(taus, base.phy, base.traffic);
      double p_e = 0.0, p_s = 0.0, p_c = 0.0;
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double prob = 1.0;
        int k = 0;
        for (int j = 0; j < n; ++j) {
          if (mask & (std::size_t{1} << j)) {
            prob *= taus[static_cast<std::size_t>(j)];
            ++k;
          } else {
            prob *= 1.0 - taus[static_cast<std::size_t>(j)];
          }
        }
        (k == 0 ? p_e : (k == 1 ? p_s : p_c)) += prob;
      }
      worst = std::max({worst, std::abs(p_e - stats.p_e), std::abs(p_s - stats.p_s),
                        std::abs(p_c - stats.p_c)});
    }
    ok = ok && worst <= 1e-12;
    detail << "enum err " << fmt(worst) << "; ";
  }

  // closed form vs bisection over a randomized sweep
  {
    SplitMix64 rng(67);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = 1 + static_cast<int>(rng.next_below(50));
      const double t_on_us = 1000.0 + 99000.0 * rng.next_unit();
      const double c1_us = 1000.0 * rng.next_unit();
      const double closed = propfair_closed_form(n, t_on_us, c1_us);
      const double numeric = propfair_root_bisect(n, t_on_us, c1_us);
      worst = std::max(worst, std::abs(numeric - closed) / closed);
    }
    ok = ok && worst <= 1e-12;
    detail << "root err " << fmt(worst);
  }

  report(7, "determinism, partition, baseline, enumeration, root agreement", ok, detail.str());
}

}  // namespace

int main() {
  std::printf("acceptance suite (fig2 and delay runs at 100 runs x 50 s)\n");
  criterion_airtime();

  const Fig2Data fig2 = run_fig2();
  criterion_fairness_equivalence(fig2);
  criterion_model_vs_sim(fig2);
  criterion_pasta();
  criterion_delay();
  criterion_csat_penalty(fig2);
  criterion_properties();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria pass\n");
    return 0;
  }
  std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
  return 1;
}
