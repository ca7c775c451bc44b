#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "coexlab/phy_timing.hpp"
#include "coexlab/units.hpp"

namespace coexlab {

enum class Scheme { Csat, Lbe };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// A throughput configuration outside the model's validity region (negative
// effective off-time or LTE payload time). Reported, never clamped.
class InvalidRegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One LTE network duty-cycling against n saturated 802.11 stations.
struct Scenario {
  int n = 1;                       // WiFi stations
  double tau = 1.0 / 16.0;         // per-station transmit probability per MAC slot
  WifiTrafficProfile traffic;
  PhyProfile phy;
  Scheme scheme = Scheme::Csat;
  nanos_t t_on = 10 * kMilli;      // LTE burst duration
  // Mean of the exponential off-time in ns. A mean, not an event time, so
  // fractional ns are allowed (the optimum from solve_toff is not integral).
  double t_off_mean = 10 * kMilli;
  nanos_t t_lte = 1 * kMilli;      // LTE subframe duration
  double lte_rate = 135.0;         // bits per us

  void validate() const;
};

// Per-MAC-slot contention statistics.
struct SlotStats {
  double p_e = 1.0;                // all stations idle
  double p_s = 0.0;                // exactly one transmitter
  double p_c = 0.0;                // two or more transmitters
  std::vector<double> p_succ;      // per-station success probability
  double mean_slot_us = 0.0;       // E[M] = sigma*p_e + (t_b+difs)*(1-p_e)
};

// p_e = prod(1-tau_i); p_succ_j = tau_j/(1-tau_j) * p_e; p_s = sum_j p_succ_j.
// Rejects tau_j = 1. Heterogeneous taus supported even though the harness
// always drives homogeneous scenarios.
SlotStats slot_stats(std::span<const double> taus, const PhyProfile& phy,
                     const WifiTrafficProfile& traffic);
SlotStats slot_stats(const Scenario& scenario);

// Probability that a blind (CSAT) LTE on-start overlaps a WiFi transmission:
// (p_s*t_b + p_c*t_fra) / E[M]. A success slot is vulnerable for the whole
// frame+SIFS+ACK exchange, a collision slot only for the frame itself.
double p_lte_csat(const SlotStats& stats, const PhyProfile& phy,
                  const WifiTrafficProfile& traffic);

// Probability that the slot an LBE grab claims is busy: 1 - p_e.
double p_lte_lbe(const SlotStats& stats);

double p_lte(const Scenario& scenario, const SlotStats& stats);

// E[T^off]: the off-period time available as full MAC slots, in us.
// CSAT loses half a frame per overlapped on-start; LBE loses nothing.
// Throws InvalidRegimeError when the CSAT correction exceeds t_off_mean.
double effective_off_us(const Scenario& scenario, const SlotStats& stats);

// Per-station saturation throughput in bits/us (column vector over stations).
std::vector<double> wifi_throughput(const Scenario& scenario);

// LTE throughput in bits/us. Requires t_on to be an integer multiple of
// t_lte. Throws InvalidRegimeError on a negative payload numerator.
double lte_throughput(const Scenario& scenario, const SlotStats& stats);

struct AnalyticReport {
  std::vector<double> s_wifi;      // bits/us per station
  double s_lte = 0.0;              // bits/us
  double p_lte = 0.0;
  double eff_off_us = 0.0;
  double wifi_airtime = 0.0;       // full-MAC-slot fraction of a cycle
  double lte_airtime = 0.0;        // 1 - wifi_airtime
};

AnalyticReport evaluate(const Scenario& scenario);

// Stable CSV row for a report; header in analytic_csv_header().
std::string analytic_csv_header();
std::string analytic_csv_row(const Scenario& scenario, const AnalyticReport& report);

}  // namespace coexlab
