#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "coexlab/phy_timing.hpp"
#include "coexlab/rng.hpp"

using namespace coexlab;

TEST_CASE("frame duration matches hand-counted symbol totals") {
  PhyProfile phy;
  WifiTrafficProfile traffic;

  // 12342 bits -> 23 symbols of 4 us on top of the 40 us preamble
  traffic.n_agg = 1;
  CHECK(frame_duration(phy, traffic) == 132 * kMicro);

  traffic.n_agg = 64;
  CHECK(frame_duration(phy, traffic) == 5884 * kMicro);
}

TEST_CASE("frame duration ceiling edge cases") {
  PhyProfile phy;
  WifiTrafficProfile traffic;

  // Empty payload with no delimiter/header still needs one symbol for the
  // 22 service+tail bits.
  phy.l_del = 0;
  phy.l_mac_h = 0;
  traffic.payload_d = 0;
  CHECK(frame_duration(phy, traffic) == 44 * kMicro);
}

TEST_CASE("ack duration") {
  PhyProfile phy;
  CHECK(ack_duration(phy) == 44 * kMicro);  // 278 bits fit one symbol

  SUBCASE("zero-body limit") {
    phy.l_ack = 0;
    phy.l_s = 0;
    phy.l_t = 0;
    CHECK(ack_duration(phy) == phy.t_plcp);
  }
  SUBCASE("exact fit is a single symbol") {
    phy.l_ack = phy.n_sym - phy.l_s - phy.l_t;
    CHECK(ack_duration(phy) == phy.t_plcp + phy.t_sym);
  }
  SUBCASE("one bit over spills into a second symbol") {
    phy.l_ack = phy.n_sym - phy.l_s - phy.l_t + 1;
    CHECK(ack_duration(phy) == phy.t_plcp + 2 * phy.t_sym);
  }
}

TEST_CASE("zero n_sym is rejected") {
  PhyProfile phy;
  phy.n_sym = 0;
  CHECK_THROWS_AS(frame_duration(phy, WifiTrafficProfile{}), std::invalid_argument);
  CHECK_THROWS_AS(ack_duration(phy), std::invalid_argument);
}

TEST_CASE("profile validation") {
  PhyProfile phy;
  CHECK_NOTHROW(phy.validate());

  SUBCASE("negative bit length") {
    phy.l_ack = -1;
    CHECK_THROWS_AS(phy.validate(), std::invalid_argument);
  }
  SUBCASE("nonpositive duration") {
    phy.sigma = 0;
    CHECK_THROWS_AS(phy.validate(), std::invalid_argument);
  }
  SUBCASE("rate/symbol mismatch") {
    phy.data_rate = 120.0;  // 120 * 4 != 540
    CHECK_THROWS_AS(phy.validate(), std::invalid_argument);
  }
  SUBCASE("n_agg below one") {
    WifiTrafficProfile traffic;
    traffic.n_agg = 0;
    CHECK_THROWS_AS(traffic.validate(), std::invalid_argument);
  }
}

TEST_CASE("busy slot components") {
  PhyProfile phy;
  WifiTrafficProfile traffic;

  const BusySlot slot = busy_slot_components(phy, traffic);
  CHECK(slot.t_fra == 132 * kMicro);
  CHECK(slot.t_ack == 44 * kMicro);
  CHECK(slot.t_b == 192 * kMicro);
  CHECK(busy_slot_duration(phy, traffic) == 226 * kMicro);

  SUBCASE("degenerate zero-payload profile") {
    phy.l_del = 0;
    phy.l_mac_h = 0;
    traffic.payload_d = 0;
    CHECK(busy_slot_components(phy, traffic).t_b == 104 * kMicro);
  }
}

TEST_CASE("duration properties over random profiles") {
  SplitMix64 rng(42);
  PhyProfile phy;
  for (int trial = 0; trial < 200; ++trial) {
    WifiTrafficProfile traffic;
    traffic.n_agg = 1 + static_cast<std::int64_t>(rng.next_below(64));
    traffic.payload_d = static_cast<std::int64_t>(rng.next_below(20000));

    const nanos_t base = frame_duration(phy, traffic);
    // t_b always exceeds the bare frame
    CHECK(busy_slot_components(phy, traffic).t_b > base);

    // monotone in aggregation depth and payload size
    WifiTrafficProfile more = traffic;
    more.n_agg += 1 + static_cast<std::int64_t>(rng.next_below(8));
    CHECK(frame_duration(phy, more) >= base);
    more = traffic;
    more.payload_d += 1 + static_cast<std::int64_t>(rng.next_below(4000));
    CHECK(frame_duration(phy, more) >= base);

    // airtime beyond the preamble is whole symbols
    CHECK((base - phy.t_plcp) % phy.t_sym == 0);

    // a faster constellation never lengthens the frame
    PhyProfile faster = phy;
    faster.n_sym = 2 * phy.n_sym;
    faster.data_rate = 2 * phy.data_rate;
    CHECK(frame_duration(faster, traffic) <= base);
  }
}

TEST_CASE("phy profile file round trip") {
  const char* path = "phy_test_profile.txt";
  {
    std::ofstream out(path);
    out << "# overrides for two fields\n"
        << "sigma = 9\n"
        << "n_sym = 270\n"
        << "t_sym = 4\n"
        << "data_rate = 67.5\n";
  }
  const PhyProfile phy = load_phy_profile(path);
  CHECK(phy.n_sym == 270);
  CHECK(phy.sigma == 9 * kMicro);
  CHECK(phy.difs == 34 * kMicro);  // untouched default

  {
    std::ofstream out(path);
    out << "bogus_key = 1\n";
  }
  CHECK_THROWS(load_phy_profile(path));
  std::remove(path);
}
