#pragma once

#include <string>

#include "coexlab/units.hpp"

namespace coexlab {

// IEEE 802.11ac timing and rate parameters. Defaults are the 64-QAM 5/6
// configuration used throughout: 135 Mbps, 4 us OFDM symbols, 540 bits per
// symbol. Durations are integer nanoseconds, lengths are bits.
struct PhyProfile {
  nanos_t sigma = 9 * kMicro;    // idle slot
  nanos_t difs = 34 * kMicro;
  nanos_t sifs = 16 * kMicro;
  nanos_t t_plcp = 40 * kMicro;  // PLCP preamble + headers
  std::int64_t l_s = 16;         // PLCP service field
  std::int64_t l_del = 32;       // MPDU delimiter
  std::int64_t l_mac_h = 288;    // MAC header
  std::int64_t l_t = 6;          // tail bits
  std::int64_t l_ack = 256;
  std::int64_t n_sym = 540;      // bits per OFDM symbol
  nanos_t t_sym = 4 * kMicro;    // symbol duration
  double data_rate = 135.0;      // bits per us

  // Throws std::invalid_argument on nonpositive durations, negative bit
  // lengths, zero n_sym, or n_sym inconsistent with data_rate * t_sym.
  void validate() const;
};

struct WifiTrafficProfile {
  std::int64_t n_agg = 1;         // aggregated MPDUs per transmission
  std::int64_t payload_d = 12000; // payload bits per MPDU

  void validate() const;

  // Payload bits delivered by one successful transmission.
  std::int64_t delivered_bits() const { return n_agg * payload_d; }
};

// Data frame (A-MPDU) on-air duration:
//   t_plcp + ceil((l_s + n_agg*(l_del + l_mac_h + D) + l_t) / n_sym) * t_sym
nanos_t frame_duration(const PhyProfile& phy, const WifiTrafficProfile& traffic);

// ACK duration: t_plcp + ceil((l_s + l_ack + l_t) / n_sym) * t_sym
nanos_t ack_duration(const PhyProfile& phy);

struct BusySlot {
  nanos_t t_fra = 0;
  nanos_t t_ack = 0;
  nanos_t t_b = 0;  // t_fra + sifs + t_ack; a busy MAC slot lasts t_b + difs
};

BusySlot busy_slot_components(const PhyProfile& phy, const WifiTrafficProfile& traffic);

// Duration of a busy MAC slot (t_b + DIFS).
inline nanos_t busy_slot_duration(const PhyProfile& phy, const WifiTrafficProfile& traffic) {
  return busy_slot_components(phy, traffic).t_b + phy.difs;
}

// Loads a PhyProfile from a key=value file. Keys mirror the field names
// (sigma, difs, sifs, t_plcp, l_s, l_del, l_mac_h, l_t, l_ack, n_sym, t_sym,
// data_rate); durations in us, lengths in bits, data_rate in bits/us.
// Missing keys keep their defaults. Unknown keys are an error.
PhyProfile load_phy_profile(const std::string& path);

}  // namespace coexlab
