#include "coexlab/propfair.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace coexlab {

std::pair<double, double> overhead_terms(const Scenario& scenario, const SlotStats& stats) {
  const nanos_t t_fra = frame_duration(scenario.phy, scenario.traffic);
  const double t_fra_us = to_us(t_fra);
  if (scenario.scheme == Scheme::Csat) {
    const double p = p_lte_csat(stats, scenario.phy, scenario.traffic);
    const double c1 = 0.5 * t_fra_us * p;
    const double c2 = to_us(ceil_div(t_fra, 2 * scenario.t_lte) * scenario.t_lte) * p;
    return {c1, c2};
  }
  const double p = p_lte_lbe(stats);
  const double t_res_us = to_us(scenario.t_lte) / 2.0;
  const double lost_us = std::max(t_res_us, to_us(ceil_div(t_fra, scenario.t_lte) * scenario.t_lte));
  const double c2 = lost_us * p - t_res_us * (1.0 - p);
  return {0.0, c2};
}

double propfair_closed_form(int n, double t_on_us, double c1_us) {
  return static_cast<double>(n) * (t_on_us + c1_us);
}

namespace {

double stationarity_gap(double z, int n, double t_on_us, double c1_us) {
  const double ez = std::exp(z);
  return ez / (t_on_us + c1_us + ez) - static_cast<double>(n) / (n + 1.0);
}

}  // namespace

double propfair_root_bisect(int n, double t_on_us, double c1_us) {
  if (n < 1) throw std::invalid_argument("propfair: n must be >= 1");
  if (!(t_on_us + c1_us > 0.0)) throw std::invalid_argument("propfair: t_on + c1 must be > 0");
  double lo = -60.0;
  double hi = 1.0;
  while (stationarity_gap(hi, n, t_on_us, c1_us) < 0.0) {
    hi += 10.0;
    if (hi > 700.0) throw std::runtime_error("propfair: failed to bracket root");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (stationarity_gap(mid, n, t_on_us, c1_us) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

PropFairResult solve_toff(const Scenario& scenario, const SlotStats& stats) {
  if (scenario.n < 1)
    throw std::invalid_argument("propfair: n must be >= 1 (with no WiFi stations LTE takes the whole channel)");
  const auto [c1, c2] = overhead_terms(scenario, stats);
  const double t_on_us = to_us(scenario.t_on);

  PropFairResult result;
  result.c1_us = c1;
  result.c2_us = c2;
  result.z_star_us = propfair_closed_form(scenario.n, t_on_us, c1);
  result.t_off_star_us = result.z_star_us + c1;
  result.kkt_residual = std::abs(result.z_star_us / (t_on_us + c1 + result.z_star_us) -
                                 static_cast<double>(scenario.n) / (scenario.n + 1.0));
  result.wifi_airtime = (result.t_off_star_us - c1) / (t_on_us + result.t_off_star_us);
  result.lte_airtime = (t_on_us + c1) / (t_on_us + result.t_off_star_us);

  // Regression guard: the bracketing route has to land on the same root.
  const double numeric = propfair_root_bisect(scenario.n, t_on_us, c1);
  if (std::abs(numeric - result.z_star_us) > 1e-9 * result.z_star_us)
    throw std::runtime_error("propfair: closed form and numeric root disagree");
  return result;
}

PropFairResult solve_toff(const Scenario& scenario) {
  return solve_toff(scenario, slot_stats(scenario));
}

std::pair<double, double> airtime_fractions(const PropFairResult& result, const Scenario& scenario) {
  const double t_on_us = to_us(scenario.t_on);
  const double wifi = (result.t_off_star_us - result.c1_us) / (t_on_us + result.t_off_star_us);
  const double lte = (t_on_us + result.c1_us) / (t_on_us + result.t_off_star_us);
  return {wifi, lte};
}

std::string propfair_csv_header() {
  return "scheme,n,t_on_ms,c1_us,t_off_star_ms,wifi_airtime,lte_airtime,kkt_residual";
}

std::string propfair_csv_row(const Scenario& scenario, const PropFairResult& result) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << scheme_name(scenario.scheme) << ',' << scenario.n << ',' << to_ms(scenario.t_on) << ','
      << result.c1_us << ',' << result.t_off_star_us / 1e3 << ',' << result.wifi_airtime << ','
      << result.lte_airtime << ',' << result.kkt_residual;
  return out.str();
}

}  // namespace coexlab
