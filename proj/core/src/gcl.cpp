#include "tsnsim/gcl.hpp"

#include <algorithm>

#include "tsnsim/error.hpp"

namespace tsnsim {
namespace {

constexpr GateMask bit(int q) { return static_cast<GateMask>(1U << q); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Gcl::Gcl(std::vector<GclEntry> entries, SimTime base_time) : entries_(std::move(entries)), base_(base_time) {
  if (entries_.empty()) throw ConfigError("GCL must have at least one entry");
  for (const GclEntry& e : entries_) {
    if (e.duration_ns <= 0) throw ConfigError("GCL entry duration must be positive");
    starts_.push_back(cycle_);
    cycle_ += e.duration_ns;
  }
  runs_.resize(8);
  for (int q = 0; q < 8; ++q) {
    auto& runs = runs_[static_cast<std::size_t>(q)];
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!((entries_[i].gate_mask >> q) & 1U)) continue;
      const std::int64_t s = starts_[i];
      const std::int64_t e = s + entries_[i].duration_ns;
      if (!runs.empty() && runs.back().second == s) {
        runs.back().second = e;
      } else {
        runs.emplace_back(s, e);
      }
    }
    // Join a run ending at the cycle end with the one starting at 0.
    if (runs.size() > 1 && runs.front().first == 0 && runs.back().second == cycle_) {
      runs.back().second += runs.front().second;
      runs.erase(runs.begin());
    }
  }
}

std::int64_t Gcl::phase_of(SimTime t) const {
  const std::int64_t r = (t - base_) % cycle_;
  return r < 0 ? r + cycle_ : r;
}

std::size_t Gcl::entry_index_at(SimTime t) const {
  const std::int64_t phase = phase_of(t);
  auto it = std::upper_bound(starts_.begin(), starts_.end(), phase);
  return static_cast<std::size_t>(it - starts_.begin()) - 1;
}

GateMask Gcl::gate_state(SimTime t) const { return entries_[entry_index_at(t)].gate_mask; }

bool Gcl::always_open(int queue) const {
  const auto& runs = runs_[static_cast<std::size_t>(queue)];
  return runs.size() == 1 && runs.front().first == 0 && runs.front().second == cycle_;
}

bool Gcl::ever_open(int queue) const { return !runs_[static_cast<std::size_t>(queue)].empty(); }

std::vector<std::pair<std::int64_t, std::int64_t>> Gcl::open_runs(int queue) const {
  return runs_[static_cast<std::size_t>(queue)];
}

Interval Gcl::open_interval(int queue, SimTime t) const {
  if (!ever_open(queue)) return {SimTime::max(), SimTime::max()};
  if (always_open(queue)) return {t, SimTime::max()};
  const auto& runs = runs_[static_cast<std::size_t>(queue)];
  const std::int64_t k = floor_div(t - base_, cycle_);
  // A wrapping run of the previous cycle may still cover t.
  for (std::int64_t c = k - 1; c <= k + 1; ++c) {
    const std::int64_t origin = base_.ns + c * cycle_;
    for (const auto& [s, e] : runs) {
      if (origin + e > t.ns) return {SimTime{origin + s}, SimTime{origin + e}};
    }
  }
  return {SimTime::max(), SimTime::max()};
}

SimTime Gcl::next_fit(int queue, SimTime t, std::int64_t duration_ns) const {
  if (!ever_open(queue)) return SimTime::max();
  if (always_open(queue)) return t;
  const auto& runs = runs_[static_cast<std::size_t>(queue)];
  const std::size_t limit = 2 * runs.size() + 2;
  SimTime cursor = t;
  for (std::size_t i = 0; i < limit; ++i) {
    const Interval iv = open_interval(queue, cursor);
    const SimTime s = std::max(iv.start, cursor);
    if (iv.end - s >= duration_ns) return s;
    cursor = iv.end;
  }
  return SimTime::max();
}

Gcl make_gcl(int config, std::int64_t slot_unit_ns, int slot_units, bool guard_band, SimTime base_time) {
  if (slot_unit_ns <= 0 || slot_units <= 0) throw ConfigError("GCL slot unit and slot count must be positive");
  if (guard_band && (config == 2 || config == 3)) {
    throw ConfigError("configurations 2 and 3 do not take a guard band");
  }
  const GateMask hi = bit(kQueueHigh);
  const GateMask med = bit(kQueueMed);
  const GateMask lo = bit(kQueueLow);
  const GateMask cross = bit(kQueueCross);
  std::vector<GateMask> slots;
  switch (config) {
    case 1: slots = {hi, med, lo, cross}; break;
    case 2: slots = {hi, static_cast<GateMask>(hi | med), static_cast<GateMask>(hi | lo), static_cast<GateMask>(hi | cross)}; break;
    case 3:
      slots = {hi, static_cast<GateMask>(hi | med), static_cast<GateMask>(hi | med | lo),
               static_cast<GateMask>(hi | med | lo | cross)};
      break;
    case 4:
      slots = {hi, med, static_cast<GateMask>(hi | lo), static_cast<GateMask>(med | cross),
               static_cast<GateMask>(hi | lo), med, hi};
      break;
    default: throw ConfigError("GCL configuration must be 1, 2, 3 or 4");
  }
  std::vector<GclEntry> entries;
  for (GateMask m : slots) entries.push_back({static_cast<GateMask>(m | bit(kQueuePtp)), slot_unit_ns * slot_units});
  if (guard_band) entries.push_back({bit(kQueuePtp), slot_unit_ns});
  return Gcl(std::move(entries), base_time);
}

GateMask parse_gate_mask(std::string_view bits) {
  if (bits.size() != 8) throw ConfigError("gate mask must have 8 characters");
  GateMask m = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    if (bits[i] == '1') {
      m = static_cast<GateMask>(m | bit(7 - static_cast<int>(i)));
    } else if (bits[i] != '0') {
      throw ConfigError("gate mask may contain only 0 and 1");
    }
  }
  return m;
}

std::string format_gate_mask(GateMask mask) {
  std::string s(8, '0');
  for (int q = 0; q < 8; ++q) {
    if ((mask >> q) & 1U) s[static_cast<std::size_t>(7 - q)] = '1';
  }
  return s;
}

}  // namespace tsnsim
