#include "coexlab/coex_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "coexlab/rng.hpp"

namespace coexlab {

double SimReport::wifi_mbps_mean() const {
  if (wifi_bits.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < wifi_bits.size(); ++j) sum += wifi_mbps(j);
  return sum / static_cast<double>(wifi_bits.size());
}

double SimReport::empirical_p_lte() const {
  if (lte_on_count == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(lte_wifi_collision_count) / static_cast<double>(lte_on_count);
}

double SimReport::realized_off_mean_us() const {
  if (off_period_count == 0) return std::numeric_limits<double>::quiet_NaN();
  return realized_off_sum_us / static_cast<double>(off_period_count);
}

namespace {

nanos_t exp_ns(SplitMix64& rng, double mean) {
  if (mean <= 0.0) return 0;
  return static_cast<nanos_t>(std::llround(rng.next_exponential(mean)));
}

struct Engine {
  const SimConfig& config;
  const Scenario& sc;
  SimReport rep;

  nanos_t sigma, busy_slot, t_b, t_fra;
  nanos_t csat_loss, lbe_collision_loss;
  std::int64_t delivered_bits;

  SplitMix64 lte_rng;
  std::vector<SplitMix64> station_rng;
  std::vector<nanos_t> hol;

  nanos_t t = 0;
  nanos_t off_start = 0;

  explicit Engine(const SimConfig& cfg)
      : config(cfg), sc(cfg.scenario), lte_rng(derive_seed(cfg.seed, 0)) {
    sc.validate();
    if (cfg.horizon <= 0) throw std::invalid_argument("SimConfig: horizon must be > 0");
    const BusySlot bs = busy_slot_components(sc.phy, sc.traffic);
    sigma = sc.phy.sigma;
    t_b = bs.t_b;
    t_fra = bs.t_fra;
    busy_slot = bs.t_b + sc.phy.difs;
    csat_loss = ceil_div(t_fra, 2 * sc.t_lte) * sc.t_lte;
    lbe_collision_loss = ceil_div(t_fra, sc.t_lte) * sc.t_lte;
    delivered_bits = sc.traffic.delivered_bits();

    station_rng.reserve(static_cast<std::size_t>(sc.n));
    for (int j = 0; j < sc.n; ++j)
      station_rng.emplace_back(derive_seed(cfg.seed, static_cast<std::uint64_t>(j) + 1));
    hol.assign(static_cast<std::size_t>(sc.n), 0);

    rep.horizon = cfg.horizon;
    rep.wifi_success_count.assign(static_cast<std::size_t>(sc.n), 0);
    rep.wifi_bits.assign(static_cast<std::size_t>(sc.n), 0);
  }

  // One Bernoulli(tau) draw per station per MAC slot, stations in index order.
  std::pair<int, int> draw_slot() {
    int transmitters = 0;
    int who = -1;
    for (int j = 0; j < sc.n; ++j) {
      if (station_rng[static_cast<std::size_t>(j)].next_bernoulli(sc.tau)) {
        ++transmitters;
        who = j;
      }
    }
    return {transmitters, who};
  }

  void record_success(int station, nanos_t ack_end) {
    const auto j = static_cast<std::size_t>(station);
    rep.wifi_success_count[j] += 1;
    rep.wifi_bits[j] += delivered_bits;
    rep.delay_samples.push_back(ack_end - hol[j]);
    hol[j] = ack_end;
  }

  // Runs one contention slot starting at t, truncating at `cut` (grab instant
  // or horizon). Returns true if the slot completed, false if it was cut.
  // On a cut, a success/collision that already finished on air still counts.
  bool contention_slot(nanos_t cut, bool cut_is_lte, bool* hit_transmission) {
    const nanos_t slot_start = t;
    const auto [transmitters, who] = draw_slot();
    const nanos_t slot_end = slot_start + (transmitters == 0 ? sigma : busy_slot);
    if (cut < slot_end) {
      if (transmitters == 1) {
        const nanos_t ack_end = slot_start + t_b;
        if (cut >= ack_end)
          record_success(who, ack_end);
        else if (cut_is_lte)
          *hit_transmission = true;
      } else if (transmitters >= 2) {
        const nanos_t fra_end = slot_start + t_fra;
        if (cut >= fra_end)
          rep.wifi_collision_count += 1;
        else if (cut_is_lte)
          *hit_transmission = true;
      }
      rep.truncated_partial_time += cut - slot_start;
      t = cut;
      return false;
    }
    if (transmitters == 0) {
      rep.idle_time += sigma;
    } else {
      rep.wifi_busy_time += busy_slot;
      if (transmitters == 1)
        record_success(who, slot_start + t_b);
      else
        rep.wifi_collision_count += 1;
    }
    t = slot_end;
    return true;
  }

  // LTE burst of t_on starting at t; the first loss_ns of it carry no payload.
  void lte_burst(bool hit_transmission, nanos_t loss_ns) {
    rep.lte_on_count += 1;
    if (hit_transmission) rep.lte_wifi_collision_count += 1;
    rep.realized_off_sum_us += to_us(t - off_start);
    rep.off_period_count += 1;

    const nanos_t on_start = t;
    const nanos_t on_end = on_start + sc.t_on;
    const nanos_t eff_end = std::min(on_end, config.horizon);
    rep.lte_on_time += eff_end - on_start;
    const nanos_t payload_start = on_start + std::min(loss_ns, sc.t_on);
    if (eff_end > payload_start) rep.lte_bits += sc.lte_rate * to_us(eff_end - payload_start);
    t = std::min(on_end, config.horizon);
    off_start = t;
  }

  void run_csat() {
    nanos_t on_start = config.lte_enabled
                           ? exp_ns(lte_rng, sc.t_off_mean)
                           : std::numeric_limits<nanos_t>::max();
    while (t < config.horizon) {
      if (config.lte_enabled && on_start <= t) {
        // The burst fires exactly on a slot boundary: no slot in progress.
        lte_burst(false, 0);
        if (t >= config.horizon) break;
        on_start = t + exp_ns(lte_rng, sc.t_off_mean);
        continue;
      }
      const nanos_t cut = std::min(config.horizon, on_start);
      bool hit = false;
      const bool completed = contention_slot(cut, cut == on_start, &hit);
      if (!completed && t == on_start && t < config.horizon) {
        lte_burst(hit, hit ? csat_loss : 0);
        if (t >= config.horizon) break;
        on_start = t + exp_ns(lte_rng, sc.t_off_mean);
      }
    }
  }

  void run_lbe() {
    // Free-running schedule clock: each expiry is the previous one plus
    // t_on plus a fresh exponential draw, so grab deferral to the next slot
    // boundary shifts bursts without accumulating into the mean off-time.
    nanos_t expiry = config.lte_enabled ? exp_ns(lte_rng, sc.t_off_mean)
                                        : std::numeric_limits<nanos_t>::max();
    while (t < config.horizon) {
      if (config.lte_enabled && expiry <= t) {
        // Grab the slot starting at this boundary. Stations contend into it
        // blind; any transmission collides with the LTE burst.
        const auto [transmitters, who] = draw_slot();
        (void)who;
        const bool hit = transmitters >= 1;
        const nanos_t reservation = static_cast<nanos_t>(
            lte_rng.next_below(static_cast<std::uint64_t>(sc.t_lte)));
        const nanos_t loss = hit ? std::max(reservation, lbe_collision_loss) : reservation;
        expiry += sc.t_on + exp_ns(lte_rng, sc.t_off_mean);
        lte_burst(hit, loss);
        continue;
      }
      bool hit = false;
      contention_slot(config.horizon, false, &hit);
    }
  }

  SimReport finish() {
    const nanos_t accounted =
        rep.idle_time + rep.wifi_busy_time + rep.lte_on_time + rep.truncated_partial_time;
    if (accounted != rep.horizon)
      throw std::logic_error("simulation time accounting does not partition the horizon");
    for (std::size_t j = 0; j < rep.wifi_bits.size(); ++j) {
      if (rep.wifi_bits[j] != rep.wifi_success_count[j] * delivered_bits)
        throw std::logic_error("delivered bits inconsistent with success count");
    }
    return std::move(rep);
  }
};

MetricStat stat_of(const std::vector<double>& xs) {
  MetricStat s;
  std::vector<double> clean;
  clean.reserve(xs.size());
  for (double x : xs)
    if (!std::isnan(x)) clean.push_back(x);
  s.runs = static_cast<int>(clean.size());
  if (clean.empty()) {
    s.mean = std::numeric_limits<double>::quiet_NaN();
    s.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double x : clean) sum += x;
  s.mean = sum / static_cast<double>(clean.size());
  if (clean.size() < 2) {
    s.stderr_ = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double ss = 0.0;
  for (double x : clean) ss += (x - s.mean) * (x - s.mean);
  const double var = ss / static_cast<double>(clean.size() - 1);
  s.stderr_ = std::sqrt(var / static_cast<double>(clean.size()));
  return s;
}

}  // namespace

SimReport run(const SimConfig& config) {
  Engine engine(config);
  if (config.scenario.scheme == Scheme::Csat)
    engine.run_csat();
  else
    engine.run_lbe();
  return engine.finish();
}

std::vector<std::pair<nanos_t, double>> delay_cdf(std::span<const nanos_t> samples,
                                                  std::span<const nanos_t> grid) {
  if (samples.empty()) throw std::invalid_argument("delay_cdf: no delay samples");
  std::vector<nanos_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<nanos_t, double>> out;
  out.reserve(grid.size());
  for (nanos_t g : grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), g);
    out.emplace_back(g, static_cast<double>(it - sorted.begin()) /
                            static_cast<double>(sorted.size()));
  }
  return out;
}

std::vector<std::pair<nanos_t, double>> delay_cdf(const SimReport& report,
                                                  std::span<const nanos_t> grid) {
  return delay_cdf(std::span<const nanos_t>(report.delay_samples), grid);
}

double delay_fraction_le(std::span<const nanos_t> samples, nanos_t threshold) {
  if (samples.empty()) throw std::invalid_argument("delay_fraction_le: no delay samples");
  std::size_t count = 0;
  for (nanos_t d : samples)
    if (d <= threshold) ++count;
  return static_cast<double>(count) / static_cast<double>(samples.size());
}

ReplicateStats replicate(const SimConfig& config, int n_runs, int n_threads, bool keep_reports) {
  if (n_runs < 1) throw std::invalid_argument("replicate: n_runs must be >= 1");
  std::vector<SimReport> reports(static_cast<std::size_t>(n_runs));

  auto work_one = [&](int i) {
    SimConfig c = config;
    c.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    reports[static_cast<std::size_t>(i)] = run(c);
    if (!keep_reports) {
      reports[static_cast<std::size_t>(i)].delay_samples.clear();
      reports[static_cast<std::size_t>(i)].delay_samples.shrink_to_fit();
    }
  };

  if (n_threads <= 1 || n_runs == 1) {
    for (int i = 0; i < n_runs; ++i) work_one(i);
  } else {
    std::atomic<int> next{0};
    const int workers = std::min(n_threads, n_runs);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) work_one(i);
      });
    for (auto& th : pool) th.join();
  }

  ReplicateStats agg;
  std::vector<double> wifi, lte, plte, wat, lat, roff;
  for (const auto& r : reports) {
    wifi.push_back(r.wifi_mbps_mean());
    lte.push_back(r.lte_mbps());
    plte.push_back(r.empirical_p_lte());
    wat.push_back(r.wifi_airtime());
    lat.push_back(r.lte_airtime());
    roff.push_back(r.realized_off_mean_us());
    agg.total_on_starts += r.lte_on_count;
    agg.total_lte_wifi_collisions += r.lte_wifi_collision_count;
    if (keep_reports)
      agg.pooled_delays.insert(agg.pooled_delays.end(), r.delay_samples.begin(),
                               r.delay_samples.end());
  }
  agg.wifi_mbps = stat_of(wifi);
  agg.lte_mbps = stat_of(lte);
  agg.p_lte = stat_of(plte);
  agg.wifi_airtime = stat_of(wat);
  agg.lte_airtime = stat_of(lat);
  agg.realized_off_us = stat_of(roff);
  if (keep_reports) agg.reports = std::move(reports);
  return agg;
}

}  // namespace coexlab
