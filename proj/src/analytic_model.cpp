#include "coexlab/analytic_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace coexlab {

const char* scheme_name(Scheme s) { return s == Scheme::Csat ? "csat" : "lbe"; }

Scheme scheme_from_name(const std::string& name) {
  if (name == "csat" || name == "CSAT") return Scheme::Csat;
  if (name == "lbe" || name == "LBE" || name == "lbt" || name == "LBT") return Scheme::Lbe;
  throw std::invalid_argument("unknown scheme '" + name + "' (expected csat or lbe)");
}

void Scenario::validate() const {
  phy.validate();
  traffic.validate();
  if (n < 0) throw std::invalid_argument("Scenario: n must be >= 0");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("Scenario: tau must be in (0,1)");
  if (t_on <= 0) throw std::invalid_argument("Scenario: t_on must be > 0");
  if (t_off_mean < 0) throw std::invalid_argument("Scenario: t_off_mean must be >= 0");
  if (t_lte <= 0) throw std::invalid_argument("Scenario: t_lte must be > 0");
  if (lte_rate < 0.0) throw std::invalid_argument("Scenario: lte_rate must be >= 0");
}

SlotStats slot_stats(std::span<const double> taus, const PhyProfile& phy,
                     const WifiTrafficProfile& traffic) {
  for (double tau : taus) {
    if (!(tau >= 0.0) || tau >= 1.0)
      throw std::invalid_argument("slot_stats: tau must be in [0,1)");
  }
  SlotStats out;
  out.p_e = 1.0;
  for (double tau : taus) out.p_e *= 1.0 - tau;
  out.p_succ.reserve(taus.size());
  for (double tau : taus) out.p_succ.push_back(tau / (1.0 - tau) * out.p_e);
  out.p_s = 0.0;
  for (double p : out.p_succ) out.p_s += p;
  out.p_c = 1.0 - out.p_e - out.p_s;
  if (out.p_c < 0.0 && out.p_c > -1e-15) out.p_c = 0.0;  // rounding guard for n <= 1
  const double busy_us = to_us(busy_slot_duration(phy, traffic));
  out.mean_slot_us = to_us(phy.sigma) * out.p_e + busy_us * (1.0 - out.p_e);
  return out;
}

SlotStats slot_stats(const Scenario& scenario) {
  scenario.validate();
  std::vector<double> taus(static_cast<std::size_t>(scenario.n), scenario.tau);
  return slot_stats(taus, scenario.phy, scenario.traffic);
}

double p_lte_csat(const SlotStats& stats, const PhyProfile& phy,
                  const WifiTrafficProfile& traffic) {
  const BusySlot busy = busy_slot_components(phy, traffic);
  return (stats.p_s * to_us(busy.t_b) + stats.p_c * to_us(busy.t_fra)) / stats.mean_slot_us;
}

double p_lte_lbe(const SlotStats& stats) { return 1.0 - stats.p_e; }

double p_lte(const Scenario& scenario, const SlotStats& stats) {
  return scenario.scheme == Scheme::Csat
             ? p_lte_csat(stats, scenario.phy, scenario.traffic)
             : p_lte_lbe(stats);
}

double effective_off_us(const Scenario& scenario, const SlotStats& stats) {
  const double t_off_us = to_us(scenario.t_off_mean);
  if (scenario.scheme == Scheme::Lbe) return t_off_us;
  const double t_fra_us = to_us(frame_duration(scenario.phy, scenario.traffic));
  const double p = p_lte_csat(stats, scenario.phy, scenario.traffic);
  const double eff = t_off_us - 0.5 * t_fra_us * p;
  if (eff < 0.0)
    throw InvalidRegimeError("effective off-time negative: t_off_mean too small for CSAT");
  return eff;
}

std::vector<double> wifi_throughput(const Scenario& scenario) {
  const SlotStats stats = slot_stats(scenario);
  const double eff_off = effective_off_us(scenario, stats);
  const double cycle_us = to_us(scenario.t_on) + to_us(scenario.t_off_mean);
  const double scale = eff_off / cycle_us;
  const double d_bits = static_cast<double>(scenario.traffic.delivered_bits());
  std::vector<double> out;
  out.reserve(stats.p_succ.size());
  for (double p : stats.p_succ) out.push_back(p / stats.mean_slot_us * scale * d_bits);
  return out;
}

double lte_throughput(const Scenario& scenario, const SlotStats& stats) {
  if (scenario.t_on % scenario.t_lte != 0)
    throw std::invalid_argument("lte_throughput: t_on must be an integer multiple of t_lte");
  const nanos_t t_fra = frame_duration(scenario.phy, scenario.traffic);
  const double p = p_lte(scenario, stats);
  const double t_on_us = to_us(scenario.t_on);
  const double cycle_us = t_on_us + to_us(scenario.t_off_mean);
  double payload_us = 0.0;
  if (scenario.scheme == Scheme::Csat) {
    // A mid-frame collision wipes the subframes overlapping the front half
    // of the WiFi frame.
    const double lost_us = to_us(ceil_div(t_fra, 2 * scenario.t_lte) * scenario.t_lte);
    payload_us = t_on_us - lost_us * p;
  } else {
    // Reservation signal runs to the next subframe boundary; a grab-slot
    // collision additionally wipes the subframes overlapping the WiFi frame.
    const double t_res_us = to_us(scenario.t_lte) / 2.0;
    const double lost_us = std::max(t_res_us, to_us(ceil_div(t_fra, scenario.t_lte) * scenario.t_lte));
    payload_us = t_on_us - lost_us * p - t_res_us * (1.0 - p);
  }
  if (payload_us < 0.0)
    throw InvalidRegimeError("LTE payload time negative: t_on too small for collision/reservation losses");
  return scenario.lte_rate * payload_us / cycle_us;
}

AnalyticReport evaluate(const Scenario& scenario) {
  const SlotStats stats = slot_stats(scenario);
  AnalyticReport report;
  report.p_lte = p_lte(scenario, stats);
  report.eff_off_us = effective_off_us(scenario, stats);
  const double cycle_us = to_us(scenario.t_on) + to_us(scenario.t_off_mean);
  report.wifi_airtime = report.eff_off_us / cycle_us;
  report.lte_airtime = 1.0 - report.wifi_airtime;
  report.s_wifi = wifi_throughput(scenario);
  report.s_lte = lte_throughput(scenario, stats);
  return report;
}

std::string analytic_csv_header() {
  return "scheme,n,tau,n_agg,t_on_ms,t_off_ms,s_wifi_mbps,s_lte_mbps,p_lte,wifi_airtime,lte_airtime";
}

std::string analytic_csv_row(const Scenario& scenario, const AnalyticReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << scheme_name(scenario.scheme) << ',' << scenario.n << ',' << scenario.tau << ','
      << scenario.traffic.n_agg << ',' << to_ms(scenario.t_on) << ',' << to_ms(scenario.t_off_mean)
      << ',' << (report.s_wifi.empty() ? 0.0 : report.s_wifi.front()) << ',' << report.s_lte << ','
      << report.p_lte << ',' << report.wifi_airtime << ',' << report.lte_airtime;
  return out.str();
}

}  // namespace coexlab
