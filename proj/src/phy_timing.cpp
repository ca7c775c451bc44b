#include "coexlab/phy_timing.hpp"

#include <cmath>
#include <stdexcept>

#include "coexlab/kv_file.hpp"

namespace coexlab {

void PhyProfile::validate() const {
  if (sigma <= 0 || difs <= 0 || sifs <= 0 || t_plcp <= 0 || t_sym <= 0)
    throw std::invalid_argument("PhyProfile: all durations must be > 0");
  if (l_s < 0 || l_del < 0 || l_mac_h < 0 || l_t < 0 || l_ack < 0)
    throw std::invalid_argument("PhyProfile: bit lengths must be >= 0");
  if (n_sym <= 0)
    throw std::invalid_argument("PhyProfile: n_sym must be > 0");
  if (data_rate <= 0.0)
    throw std::invalid_argument("PhyProfile: data_rate must be > 0");
  // n_sym must equal data_rate [bits/us] * t_sym [us].
  const double expected = data_rate * to_us(t_sym);
  if (std::abs(expected - static_cast<double>(n_sym)) > 1e-9 * static_cast<double>(n_sym))
    throw std::invalid_argument("PhyProfile: n_sym != data_rate * t_sym");
}

void WifiTrafficProfile::validate() const {
  if (n_agg < 1) throw std::invalid_argument("WifiTrafficProfile: n_agg must be >= 1");
  if (payload_d < 0) throw std::invalid_argument("WifiTrafficProfile: payload_d must be >= 0");
}

nanos_t frame_duration(const PhyProfile& phy, const WifiTrafficProfile& traffic) {
  phy.validate();
  traffic.validate();
  const std::int64_t bits = phy.l_s + traffic.n_agg * (phy.l_del + phy.l_mac_h + traffic.payload_d) + phy.l_t;
  return phy.t_plcp + ceil_div(bits, phy.n_sym) * phy.t_sym;
}

nanos_t ack_duration(const PhyProfile& phy) {
  phy.validate();
  const std::int64_t bits = phy.l_s + phy.l_ack + phy.l_t;
  return phy.t_plcp + ceil_div(bits, phy.n_sym) * phy.t_sym;
}

BusySlot busy_slot_components(const PhyProfile& phy, const WifiTrafficProfile& traffic) {
  BusySlot out;
  out.t_fra = frame_duration(phy, traffic);
  out.t_ack = ack_duration(phy);
  out.t_b = out.t_fra + phy.sifs + out.t_ack;
  return out;
}

PhyProfile load_phy_profile(const std::string& path) {
  const auto sections = parse_kv_file(path);
  if (sections.size() > 1)
    throw std::runtime_error(path + ": phy profile must not contain sections");
  PhyProfile phy;
  for (const auto& [key, value] : sections.front().values) {
    KvSection one{"", {{key, value}}};
    if (key == "sigma") phy.sigma = us_to_ns(kv_double(one, key));
    else if (key == "difs") phy.difs = us_to_ns(kv_double(one, key));
    else if (key == "sifs") phy.sifs = us_to_ns(kv_double(one, key));
    else if (key == "t_plcp") phy.t_plcp = us_to_ns(kv_double(one, key));
    else if (key == "l_s") phy.l_s = kv_int(one, key);
    else if (key == "l_del") phy.l_del = kv_int(one, key);
    else if (key == "l_mac_h") phy.l_mac_h = kv_int(one, key);
    else if (key == "l_t") phy.l_t = kv_int(one, key);
    else if (key == "l_ack") phy.l_ack = kv_int(one, key);
    else if (key == "n_sym") phy.n_sym = kv_int(one, key);
    else if (key == "t_sym") phy.t_sym = us_to_ns(kv_double(one, key));
    else if (key == "data_rate") phy.data_rate = kv_double(one, key);
    else throw std::runtime_error(path + ": unknown phy key '" + key + "'");
  }
  phy.validate();
  return phy;
}

}  // namespace coexlab
