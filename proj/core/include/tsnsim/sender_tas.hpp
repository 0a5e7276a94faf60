#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "tsnsim/frame.hpp"
#include "tsnsim/gcl.hpp"

namespace tsnsim {

inline constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

/// Open window in sender-local time, as offsets from the schedule base.
/// start lies in [0, cycle); end may exceed the cycle when the window wraps.
struct SenderWindow {
  std::int64_t start = 0;
  std::int64_t end = 0;
};

/// Launch-time windows of one sender, cyclic in the sender's local clock.
class SenderSchedule {
 public:
  /// Windows may be given in any order and may overlap; they are merged.
  SenderSchedule(std::int64_t cycle_ns, std::int64_t base_ns, std::vector<SenderWindow> windows, int queue = 0,
                 std::int64_t advance_ns = 0);

  std::int64_t cycle_ns() const { return cycle_; }
  std::int64_t base_ns() const { return base_; }
  int queue() const { return queue_; }
  std::int64_t advance_ns() const { return advance_; }
  const std::vector<SenderWindow>& windows() const { return windows_; }
  bool always_open() const { return always_open_; }

  bool is_open(std::int64_t local_ns) const;
  /// Earliest s >= desired with [s, s + duration) inside one open window;
  /// kNever when no window is long enough.
  std::int64_t next_release(std::int64_t desired_ns, std::int64_t duration_ns = 0) const;

 private:
  std::int64_t cycle_;
  std::int64_t base_;
  int queue_;
  std::int64_t advance_;
  std::vector<SenderWindow> windows_;
  bool always_open_ = false;
};

/// Switch windows of `queue`, shifted earlier by advance_ns and stretched by
/// `dilation` (capped at one cycle). Throws ConfigError if the queue is
/// never open or the arguments are out of range.
SenderSchedule derive_sender_schedule(const Gcl& switch_gcl, int queue, std::int64_t advance_ns, int dilation = 1);

/// Release instant for a frame wanting to leave at desired_ns whose
/// transmission lasts duration_ns.
inline std::int64_t etf_release(const SenderSchedule& schedule, std::int64_t desired_ns, std::int64_t duration_ns = 0) {
  return schedule.next_release(desired_ns, duration_ns);
}

/// Frames waiting for their launch time, ordered by target time (insertion
/// order among equal targets). Bounded; overflow is a sender drop.
class HoldBuffer {
 public:
  explicit HoldBuffer(std::size_t capacity = 1024) : capacity_(capacity) {}

  bool push(std::int64_t target_ns, const Frame& frame);
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  std::int64_t front_target() const { return items_.begin()->first; }
  const Frame& front() const { return items_.begin()->second; }
  Frame pop();
  std::uint64_t dropped() const { return dropped_; }

 private:
  std::size_t capacity_;
  std::multimap<std::int64_t, Frame> items_;
  std::uint64_t dropped_ = 0;
};

}  // namespace tsnsim
