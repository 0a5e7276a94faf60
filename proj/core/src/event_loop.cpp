#include "tsnsim/event_loop.hpp"

#include <algorithm>
#include <string>

#include "tsnsim/error.hpp"

namespace tsnsim {

EventId EventLoop::schedule(SimTime fire_at, Action action, int phase) {
  if (fire_at < now_) {
    throw CausalityError("causality violation: event at " + std::to_string(fire_at.ns) +
                         " ns scheduled at " + std::to_string(now_.ns) + " ns");
  }
  std::uint32_t slot;
  if (free_slots_.empty()) {
    slot = static_cast<std::uint32_t>(slots_.size());
    slots_.emplace_back();
  } else {
    slot = free_slots_.back();
    free_slots_.pop_back();
  }
  Slot& s = slots_[slot];
  ++s.generation;
  s.action = std::move(action);
  s.live = true;
  ++live_count_;
  heap_.push_back(Key{fire_at, phase, slot, next_seq_++});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return (static_cast<EventId>(s.generation) << 32) | slot;
}

bool EventLoop::cancel(EventId id) {
  const auto slot = static_cast<std::uint32_t>(id & 0xFFFF'FFFFU);
  if (slot >= slots_.size()) return false;
  Slot& s = slots_[slot];
  if (!s.live || s.generation != static_cast<std::uint32_t>(id >> 32)) return false;
  // the key stays in the heap and is skipped when it surfaces
  s.live = false;
  s.action = nullptr;
  --live_count_;
  return true;
}

std::uint64_t EventLoop::run_until(SimTime t_end) {
  std::uint64_t count = 0;
  while (!heap_.empty() && heap_.front().fire_at <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    const Key key = heap_.back();
    heap_.pop_back();
    Slot& s = slots_[key.slot];
    if (!s.live) {
      free_slots_.push_back(key.slot);
      continue;
    }
    Action action = std::move(s.action);
    s.action = nullptr;
    s.live = false;
    --live_count_;
    free_slots_.push_back(key.slot);
    now_ = key.fire_at;
    action();
    ++count;
  }
  if (t_end > now_) now_ = t_end;
  processed_ += count;
  return count;
}

}  // namespace tsnsim
