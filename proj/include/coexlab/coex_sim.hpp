#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coexlab/analytic_model.hpp"
#include "coexlab/units.hpp"

namespace coexlab {

enum class OffDistribution { Exponential };

struct SimConfig {
  Scenario scenario;
  nanos_t horizon = 50 * kSecond;
  std::uint64_t seed = 1;
  // Off-times are drawn with mean scenario.t_off_mean; only the exponential
  // family is defined.
  OffDistribution off_distribution = OffDistribution::Exponential;
  // Suppresses all LTE activity; the channel becomes a plain slotted
  // CSMA system (used by the slotted-model baseline checks).
  bool lte_enabled = true;
};

// Raw outcome of one simulation run. Deterministic given (config, seed).
struct SimReport {
  nanos_t horizon = 0;

  std::vector<std::int64_t> wifi_success_count;  // per station
  std::vector<std::int64_t> wifi_bits;           // per station, payload only
  std::int64_t wifi_collision_count = 0;         // completed WiFi/WiFi collision slots
  std::int64_t lte_wifi_collision_count = 0;     // LTE starts overlapping a WiFi transmission
  std::int64_t lte_on_count = 0;

  // Partition of the horizon; sums exactly to horizon.
  nanos_t idle_time = 0;
  nanos_t wifi_busy_time = 0;
  nanos_t lte_on_time = 0;
  nanos_t truncated_partial_time = 0;

  double lte_bits = 0.0;

  // Head-of-line to successful-ACK-completion delays, pooled over stations.
  std::vector<nanos_t> delay_samples;

  // Achieved off-period durations (an LBE grab defers to a slot boundary, so
  // the achieved gap is not the drawn one; kept measurable).
  double realized_off_sum_us = 0.0;
  std::int64_t off_period_count = 0;

  double wifi_mbps(std::size_t station) const {
    return static_cast<double>(wifi_bits[station]) / to_us(horizon);
  }
  // Mean over stations; 0 when there are none.
  double wifi_mbps_mean() const;
  double lte_mbps() const { return lte_bits / to_us(horizon); }
  double empirical_p_lte() const;
  double realized_off_mean_us() const;
  double wifi_airtime() const {
    return static_cast<double>(idle_time + wifi_busy_time) / static_cast<double>(horizon);
  }
  double lte_airtime() const {
    return static_cast<double>(lte_on_time) / static_cast<double>(horizon);
  }
};

// Runs one packet-level simulation. config.seed is the run seed; the LTE
// stream and the per-station streams are derived from it (see rng.hpp).
SimReport run(const SimConfig& config);

// Empirical CDF of the delay samples on the given grid. Throws on empty
// samples. Grid must be sorted ascending.
std::vector<std::pair<nanos_t, double>> delay_cdf(const SimReport& report,
                                                  std::span<const nanos_t> grid);
std::vector<std::pair<nanos_t, double>> delay_cdf(std::span<const nanos_t> samples,
                                                  std::span<const nanos_t> grid);

// Fraction of samples <= threshold.
double delay_fraction_le(std::span<const nanos_t> samples, nanos_t threshold);

struct MetricStat {
  double mean = 0.0;
  double stderr_ = 0.0;  // NaN when runs < 2
  int runs = 0;
};

struct ReplicateStats {
  std::vector<SimReport> reports;   // in run order
  MetricStat wifi_mbps;             // per-station mean, averaged over stations
  MetricStat lte_mbps;
  MetricStat p_lte;
  MetricStat wifi_airtime;
  MetricStat lte_airtime;
  MetricStat realized_off_us;
  std::int64_t total_on_starts = 0;
  std::int64_t total_lte_wifi_collisions = 0;
  std::vector<nanos_t> pooled_delays;
};

// n_runs independent runs; run i uses seed derive_seed(config.seed, i).
// Aggregation is in run order regardless of thread count, so repeated
// invocations are bit-identical.
ReplicateStats replicate(const SimConfig& config, int n_runs, int n_threads = 1,
                         bool keep_reports = false);

}  // namespace coexlab
