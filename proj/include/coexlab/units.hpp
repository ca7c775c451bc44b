#pragma once

#include <cmath>
#include <cstdint>

// Time is carried as integer nanoseconds throughout the library so that
// symbol-count ceilings and slot accounting stay exact. Model expectations
// (probability-weighted durations) are doubles in microseconds.
namespace coexlab {

using nanos_t = std::int64_t;

constexpr nanos_t kMicro = 1'000;            // ns per us
constexpr nanos_t kMilli = 1'000'000;        // ns per ms
constexpr nanos_t kSecond = 1'000'000'000;   // ns per s

constexpr double to_us(nanos_t ns) { return static_cast<double>(ns) / 1e3; }
constexpr double to_ms(nanos_t ns) { return static_cast<double>(ns) / 1e6; }
constexpr double to_s(nanos_t ns) { return static_cast<double>(ns) / 1e9; }

// Real-valued nanosecond quantities (means and other expectations).
constexpr double to_us(double ns) { return ns / 1e3; }
constexpr double to_ms(double ns) { return ns / 1e6; }

inline nanos_t us_to_ns(double us) { return static_cast<nanos_t>(std::llround(us * 1e3)); }
inline nanos_t ms_to_ns(double ms) { return static_cast<nanos_t>(std::llround(ms * 1e6)); }
inline nanos_t s_to_ns(double s) { return static_cast<nanos_t>(std::llround(s * 1e9)); }

// ceil(a/b) for non-negative a, positive b
constexpr std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace coexlab
