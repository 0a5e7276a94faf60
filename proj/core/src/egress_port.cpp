#include "tsnsim/egress_port.hpp"

#include <algorithm>
#include <string>

#include "tsnsim/error.hpp"
#include "tsnsim/traffic.hpp"

namespace tsnsim {

SelectionPolicy parse_selection(std::string_view name) {
  if (name == "none") return SelectionPolicy::None;
  if (name == "spq") return SelectionPolicy::Spq;
  if (name == "tas") return SelectionPolicy::Tas;
  throw ConfigError("unknown selection '" + std::string(name) + "' (none, spq, tas)");
}

std::string_view to_string(SelectionPolicy p) {
  switch (p) {
    case SelectionPolicy::None: return "none";
    case SelectionPolicy::Spq: return "spq";
    case SelectionPolicy::Tas: return "tas";
  }
  return "?";
}

std::uint64_t PortCounters::total_dropped() const {
  std::uint64_t n = 0;
  for (auto d : dropped) n += d;
  return n;
}

EgressPort::EgressPort(EgressConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.link_rate_bps <= 0) throw ConfigError("egress link rate must be positive");
  if (cfg_.shared_buffer_bytes <= 0) throw ConfigError("shared buffer must be positive");
  if (cfg_.cut_through_threshold_bytes <= 0) throw ConfigError("cut-through threshold must be positive");
  if (cfg_.processing_delay_ns < 0) throw ConfigError("processing delay must be non-negative");
  if (cfg_.selection == SelectionPolicy::Tas && !cfg_.gcl) throw ConfigError("tas selection needs a GCL");
}

SimTime EgressPort::cut_through_eligible_time(const Frame& frame, SimTime arrival_first_bit,
                                              std::int64_t ingress_rate_bps) const {
  const std::int64_t accumulated = std::min(frame.on_wire_bytes, cfg_.cut_through_threshold_bytes);
  return arrival_first_bit + bits_time(accumulated, ingress_rate_bps) + cfg_.processing_delay_ns;
}

void EgressPort::release_finished(SimTime t) {
  if (in_service_bytes_ > 0 && t >= busy_until_) {
    buffered_bytes_ -= in_service_bytes_;
    queue_bytes_[static_cast<std::size_t>(in_service_queue_)] -= in_service_bytes_;
    in_service_bytes_ = 0;
  }
}

bool EgressPort::enqueue(const Frame& frame, SimTime t) {
  release_finished(t);
  const int q = classify(frame);
  if (q < 0 || q >= kNumQueues) throw ConfigError("frame pcp out of range");
  const int acct = cfg_.selection == SelectionPolicy::None ? 0 : q;
  const std::int64_t free_bytes = cfg_.shared_buffer_bytes - buffered_bytes_;
  const bool fits = frame.on_wire_bytes <= free_bytes;
  const bool below_threshold =
      cfg_.buffer_alpha <= 0.0 ||
      static_cast<double>(queue_bytes_[static_cast<std::size_t>(acct)]) < cfg_.buffer_alpha * static_cast<double>(free_bytes);
  if (!fits || !below_threshold) {
    ++counters_.dropped[static_cast<std::size_t>(q)];
    return false;
  }
  buffered_bytes_ += frame.on_wire_bytes;
  queue_bytes_[static_cast<std::size_t>(acct)] += frame.on_wire_bytes;
  queues_[static_cast<std::size_t>(q)].push_back(QueuedFrame{frame, t, next_enqueue_seq_++});
  ++counters_.enqueued;
  return true;
}

std::size_t EgressPort::queued_frames() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

std::optional<int> EgressPort::pick_queue(SimTime t, SimTime* idle_until) const {
  *idle_until = SimTime::max();
  switch (cfg_.selection) {
    case SelectionPolicy::None: {
      std::optional<int> best;
      for (int q = 0; q < kNumQueues; ++q) {
        const auto& dq = queues_[static_cast<std::size_t>(q)];
        if (dq.empty()) continue;
        if (!best || dq.front().enqueue_seq < queues_[static_cast<std::size_t>(*best)].front().enqueue_seq) best = q;
      }
      return best;
    }
    case SelectionPolicy::Spq:
      for (int q = kNumQueues - 1; q >= 0; --q) {
        if (!queues_[static_cast<std::size_t>(q)].empty()) return q;
      }
      return std::nullopt;
    case SelectionPolicy::Tas: {
      const Gcl& gcl = *cfg_.gcl;
      for (int q = kNumQueues - 1; q >= 0; --q) {
        const auto& dq = queues_[static_cast<std::size_t>(q)];
        if (dq.empty()) continue;
        SimTime ready;
        if (cfg_.length_check) {
          ready = gcl.next_fit(q, t, serialization_time(dq.front().frame.on_wire_bytes, cfg_.link_rate_bps));
        } else {
          const Interval iv = gcl.open_interval(q, t);
          ready = std::max(iv.start, t);
        }
        if (ready == t) return q;
        *idle_until = std::min(*idle_until, ready);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

EgressPort::Selection EgressPort::select_next(SimTime t) {
  release_finished(t);
  Selection sel;
  if (t < busy_until_) {
    sel.idle_until = busy_until_;
    return sel;
  }
  SimTime idle_until;
  const std::optional<int> q = pick_queue(t, &idle_until);
  if (!q) {
    sel.idle_until = idle_until;
    return sel;
  }
  int highest = -1;
  if (logging_) {
    for (int i = kNumQueues - 1; i >= 0; --i) {
      if (!queues_[static_cast<std::size_t>(i)].empty()) {
        highest = i;
        break;
      }
    }
  }
  auto& dq = queues_[static_cast<std::size_t>(*q)];
  sel.frame = std::move(dq.front());
  dq.pop_front();
  sel.queue = *q;
  sel.start = t;
  sel.end = t + serialization_time(sel.frame->frame.on_wire_bytes, cfg_.link_rate_bps);
  busy_until_ = sel.end;
  in_service_bytes_ = sel.frame->frame.on_wire_bytes;
  in_service_queue_ = cfg_.selection == SelectionPolicy::None ? 0 : *q;
  ++counters_.transmitted;
  if (logging_) {
    const Frame& f = sel.frame->frame;
    log_.push_back(Departure{f.uid, f.kind, *q, f.stream, f.seq, sel.frame->enqueued, sel.start, sel.end, highest,
                             sel.frame->enqueue_seq});
  }
  return sel;
}

}  // namespace tsnsim
