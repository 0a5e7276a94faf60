#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tsnsim/sim_time.hpp"

namespace tsnsim {

using EventId = std::uint64_t;

/// Single-threaded discrete-event engine. Events fire in (fire_at, phase, seq)
/// order; seq is the insertion counter so equal-time events run FIFO. Phase
/// lets a component act only after everything else due at the same instant
/// (egress ports decide after all same-instant arrivals).
class EventLoop {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  /// Throws CausalityError when fire_at < now().
  EventId schedule(SimTime fire_at, Action action, int phase = 0);
  EventId schedule_in(std::int64_t delay_ns, Action action, int phase = 0) {
    return schedule(now_ + delay_ns, std::move(action), phase);
  }

  /// Returns false when the event already fired or was never scheduled.
  bool cancel(EventId id);

  /// Processes every event with fire_at <= t_end, then sets now() = t_end.
  std::uint64_t run_until(SimTime t_end);

  std::size_t pending() const { return live_count_; }
  std::uint64_t processed() const { return processed_; }

 private:
  // The heap holds plain keys; actions sit in reusable slots so heap moves
  // stay cheap. An EventId is (slot generation << 32) | slot index.
  struct Key {
    SimTime fire_at;
    int phase;
    std::uint32_t slot;
    std::uint64_t seq;
  };
  struct Later {
    bool operator()(const Key& a, const Key& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      if (a.phase != b.phase) return a.phase > b.phase;
      return a.seq > b.seq;
    }
  };
  struct Slot {
    Action action;
    std::uint32_t generation = 0;
    bool live = false;
  };

  std::vector<Key> heap_;
  std::vector<Slot> slots_;
  std::vector<std::uint32_t> free_slots_;
  std::size_t live_count_ = 0;
  SimTime now_{};
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
};

}  // namespace tsnsim
