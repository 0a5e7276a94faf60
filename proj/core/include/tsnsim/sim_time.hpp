#pragma once

#include <compare>
#include <cstdint>
#include <limits>

namespace tsnsim {

inline constexpr std::int64_t kNsPerUs = 1'000;
inline constexpr std::int64_t kNsPerMs = 1'000'000;
inline constexpr std::int64_t kNsPerSec = 1'000'000'000;

/// Point on the global true-time axis, integer nanoseconds since the
/// simulation epoch. Durations are plain std::int64_t nanoseconds.
struct SimTime {
  std::int64_t ns = 0;

  constexpr auto operator<=>(const SimTime&) const = default;

  static constexpr SimTime max() { return {std::numeric_limits<std::int64_t>::max()}; }

  constexpr SimTime& operator+=(std::int64_t d) {
    ns += d;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime t, std::int64_t d) { return {t.ns + d}; }
  friend constexpr SimTime operator-(SimTime t, std::int64_t d) { return {t.ns - d}; }
  friend constexpr std::int64_t operator-(SimTime a, SimTime b) { return a.ns - b.ns; }
};

constexpr SimTime from_seconds(double s) { return {static_cast<std::int64_t>(s * 1e9 + (s >= 0 ? 0.5 : -0.5))}; }

}  // namespace tsnsim
