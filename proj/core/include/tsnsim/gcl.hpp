#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tsnsim/sim_time.hpp"

namespace tsnsim {

/// Bit q set = gate of queue q open.
using GateMask = std::uint8_t;

inline constexpr int kQueueHigh = 6;
inline constexpr int kQueueMed = 5;
inline constexpr int kQueueLow = 4;
inline constexpr int kQueueCross = 0;
inline constexpr int kQueuePtp = 7;

struct GclEntry {
  GateMask gate_mask = 0;
  std::int64_t duration_ns = 0;
};

/// Half-open interval [start, end) on the true-time axis.
struct Interval {
  SimTime start;
  SimTime end;
};

class Gcl {
 public:
  /// Throws ConfigError for an empty list or a non-positive duration.
  explicit Gcl(std::vector<GclEntry> entries, SimTime base_time = {});

  const std::vector<GclEntry>& entries() const { return entries_; }
  SimTime base_time() const { return base_; }
  std::int64_t cycle_time() const { return cycle_; }

  std::size_t entry_index_at(SimTime t) const;
  GateMask gate_state(SimTime t) const;
  bool is_open(int queue, SimTime t) const { return (gate_state(t) >> queue) & 1U; }
  bool always_open(int queue) const;
  bool ever_open(int queue) const;

  /// The open interval of `queue` containing t, or the next one after t.
  /// Always-open queues yield [t, SimTime::max()); never-open queues yield
  /// an interval starting at SimTime::max().
  Interval open_interval(int queue, SimTime t) const;
  /// Earliest s >= t with the gate of `queue` open throughout [s, s + duration).
  /// SimTime::max() if no open run is long enough.
  SimTime next_fit(int queue, SimTime t, std::int64_t duration_ns) const;

  /// Merged open runs of `queue` as offsets within one cycle; a run wrapping
  /// the cycle end is reported with end > cycle_time.
  std::vector<std::pair<std::int64_t, std::int64_t>> open_runs(int queue) const;

 private:
  std::int64_t phase_of(SimTime t) const;

  std::vector<GclEntry> entries_;
  std::vector<std::int64_t> starts_;
  SimTime base_;
  std::int64_t cycle_ = 0;
  std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> runs_;
};

/// The four evaluated gate configurations. Data slots last slot_unit_ns *
/// slot_units; the guard band (configs 1 and 4 only) lasts one slot unit.
/// Queue 7 is open in every entry.
Gcl make_gcl(int config, std::int64_t slot_unit_ns, int slot_units, bool guard_band, SimTime base_time = {});
inline Gcl make_gcl(int config, std::int64_t slot_unit_ns, bool guard_band, SimTime base_time = {}) {
  return make_gcl(config, slot_unit_ns, 1, guard_band, base_time);
}

/// 8-character bit string, leftmost character = queue 7.
GateMask parse_gate_mask(std::string_view bits);
std::string format_gate_mask(GateMask mask);

}  // namespace tsnsim
