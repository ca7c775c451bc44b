#pragma once

#include <string>
#include <utility>

#include "coexlab/analytic_model.hpp"

namespace coexlab {

// Proportional-fair duty-cycle configuration. The utility optimum reduces to
// the stationarity condition e^z / (t_on + c1 + e^z) = n/(n+1), whose root is
// available in closed form as e^{z*} = n*(t_on + c1).
struct PropFairResult {
  double t_off_star_us = 0.0;  // optimal mean off-time, = z_star + c1
  double z_star_us = 0.0;      // e^{z*}
  double c1_us = 0.0;          // per-burst collision airtime charged to LTE (0 for LBE)
  double c2_us = 0.0;          // per-burst payload loss term (reporting only)
  double wifi_airtime = 0.0;   // n/(n+1)
  double lte_airtime = 0.0;    // 1/(n+1)
  double kkt_residual = 0.0;   // |e^z/(t_on+c1+e^z) - n/(n+1)| at the returned root
};

// (c1, c2) in us for the scenario's scheme. CSAT charges half a frame of
// collision airtime per burst; LBE charges none but loses reservation and
// collision subframes inside t_on. The LBE c2 keeps its defining sign and
// can be negative.
std::pair<double, double> overhead_terms(const Scenario& scenario, const SlotStats& stats);

// Closed-form optimum, cross-checked against an independent bracketing
// bisection of the stationarity condition. Rejects n = 0.
PropFairResult solve_toff(const Scenario& scenario, const SlotStats& stats);
PropFairResult solve_toff(const Scenario& scenario);

// Low-level solver on raw quantities (also what the randomized regression
// sweep exercises). Returns e^{z*}.
double propfair_closed_form(int n, double t_on_us, double c1_us);
// Independent route: expanding-bracket bisection on z. Returns e^{z_root}.
double propfair_root_bisect(int n, double t_on_us, double c1_us);

// (wifi, lte) airtime fractions implied by a solved configuration:
// wifi = (t_off* - c1)/(t_on + t_off*), lte = (t_on + c1)/(t_on + t_off*).
std::pair<double, double> airtime_fractions(const PropFairResult& result, const Scenario& scenario);

std::string propfair_csv_header();
std::string propfair_csv_row(const Scenario& scenario, const PropFairResult& result);

}  // namespace coexlab
