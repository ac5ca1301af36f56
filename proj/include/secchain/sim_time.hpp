#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace secchain {

// Simulated time in integer microseconds. Sub-millisecond hop latencies
// (0.25 ms per switch leg) and the second-scale control budgets are all
// exact multiples of the tick, so timer arithmetic never accumulates error.
using Tick = int64_t;

inline constexpr Tick kTicksPerSecond = 1'000'000;

inline Tick seconds_to_ticks(double s) {
  return static_cast<Tick>(std::llround(s * 1e6));
}

inline Tick millis_to_ticks(double ms) {
  return static_cast<Tick>(std::llround(ms * 1e3));
}

inline double ticks_to_seconds(Tick t) { return static_cast<double>(t) / 1e6; }
inline double ticks_to_millis(Tick t) { return static_cast<double>(t) / 1e3; }

// Shortest round-trip decimal rendering; keeps CSV and log output byte-stable
// across runs of the same binary.
std::string format_double(double v);

inline std::string format_time_s(Tick t) {
  return format_double(ticks_to_seconds(t));
}

}  // namespace secchain
