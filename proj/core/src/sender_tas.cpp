#include "tsnsim/sender_tas.hpp"

#include <algorithm>

#include "tsnsim/error.hpp"

namespace tsnsim {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace

SenderSchedule::SenderSchedule(std::int64_t cycle_ns, std::int64_t base_ns, std::vector<SenderWindow> windows,
                               int queue, std::int64_t advance_ns)
    : cycle_(cycle_ns), base_(base_ns), queue_(queue), advance_(advance_ns) {
  if (cycle_ <= 0) throw ConfigError("sender schedule cycle must be positive");
  if (advance_ < 0) throw ConfigError("sender advance must be non-negative");
  if (windows.empty()) throw ConfigError("sender schedule needs an open window");
  for (auto& w : windows) {
    if (w.end <= w.start) throw ConfigError("sender window must have positive length");
    const std::int64_t len = std::min(w.end - w.start, cycle_);
    w.start = floor_mod(w.start, cycle_);
    w.end = w.start + len;
  }
  std::sort(windows.begin(), windows.end(), [](const SenderWindow& a, const SenderWindow& b) {
    return a.start < b.start;
  });
  for (const auto& w : windows) {
    if (!windows_.empty() && w.start <= windows_.back().end) {
      windows_.back().end = std::max(windows_.back().end, w.end);
    } else {
      windows_.push_back(w);
    }
  }
  // The last window may wrap onto the first ones.
  while (windows_.size() > 1 && windows_.back().end >= windows_.front().start + cycle_) {
    windows_.back().end = std::max(windows_.back().end, windows_.front().end + cycle_);
    windows_.erase(windows_.begin());
  }
  for (const auto& w : windows_) {
    if (w.end - w.start >= cycle_) always_open_ = true;
  }
}

bool SenderSchedule::is_open(std::int64_t local_ns) const {
  if (always_open_) return true;
  return next_release(local_ns, 0) == local_ns;
}

std::int64_t SenderSchedule::next_release(std::int64_t desired_ns, std::int64_t duration_ns) const {
  if (always_open_) return desired_ns;
  const std::int64_t k = floor_div(desired_ns - base_, cycle_);
  for (std::int64_t c = k - 1; c <= k + 2; ++c) {
    const std::int64_t origin = base_ + c * cycle_;
    for (const auto& w : windows_) {
      const std::int64_t s = std::max(origin + w.start, desired_ns);
      if (origin + w.end - s >= std::max<std::int64_t>(duration_ns, 1)) return s;
    }
  }
  return kNever;
}

SenderSchedule derive_sender_schedule(const Gcl& switch_gcl, int queue, std::int64_t advance_ns, int dilation) {
  if (queue < 0 || queue >= kNumQueues) throw ConfigError("queue out of range");
  if (dilation < 1) throw ConfigError("dilation must be >= 1");
  if (advance_ns < 0) throw ConfigError("advance must be non-negative");
  if (!switch_gcl.ever_open(queue)) {
    throw ConfigError("queue " + std::to_string(queue) + " is never open in the switch GCL");
  }
  const std::int64_t cycle = switch_gcl.cycle_time();
  std::vector<SenderWindow> windows;
  for (const auto& [s, e] : switch_gcl.open_runs(queue)) {
    const std::int64_t len = std::min((e - s) * dilation, cycle);
    windows.push_back({s - advance_ns, s - advance_ns + len});
  }
  return SenderSchedule(cycle, switch_gcl.base_time().ns, std::move(windows), queue, advance_ns);
}

bool HoldBuffer::push(std::int64_t target_ns, const Frame& frame) {
  if (items_.size() >= capacity_) {
    ++dropped_;
    return false;
  }
  items_.emplace(target_ns, frame);
  return true;
}

Frame HoldBuffer::pop() {
  auto it = items_.begin();
  Frame f = it->second;
  items_.erase(it);
  return f;
}

}  // namespace tsnsim
