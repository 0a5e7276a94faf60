#include "tsnsim/switch_model.hpp"

#include <algorithm>

#include "tsnsim/error.hpp"

namespace tsnsim {

Switch::Switch(EventLoop& loop, std::vector<EgressConfig> ports) : loop_(loop) {
  if (ports.empty()) throw ConfigError("switch needs at least one egress port");
  ports_.reserve(ports.size());
  for (auto& cfg : ports) ports_.emplace_back(std::move(cfg));
}

void Switch::on_transmit(int port, TxHandler handler) {
  ports_.at(static_cast<std::size_t>(port)).handler = std::move(handler);
}

void Switch::receive(const Frame& frame, int egress_port, std::int64_t ingress_rate_bps) {
  if (egress_port == kToSwitch) {
    ++terminated_;
    if (local_) local_(frame, loop_.now());
    return;
  }
  ++frames_in_;
  ++awaiting_;
  const SimTime eligible = port(egress_port).cut_through_eligible_time(frame, loop_.now(), ingress_rate_bps);
  loop_.schedule(eligible, [this, frame, egress_port] {
    --awaiting_;
    admit(frame, egress_port);
  });
}

void Switch::inject(const Frame& frame, int egress_port) {
  ++frames_in_;
  admit(frame, egress_port);
}

void Switch::admit(const Frame& frame, int egress_port) {
  EgressPort& p = port(egress_port);
  if (!p.enqueue(frame, loop_.now())) return;
  schedule_wake(egress_port, std::max(loop_.now(), p.busy_until()));
}

void Switch::schedule_wake(int p, SimTime t) {
  PortState& st = ports_[static_cast<std::size_t>(p)];
  if (st.wake_pending) {
    if (st.wake_at <= t) return;
    loop_.cancel(st.wake_id);
  }
  st.wake_pending = true;
  st.wake_at = t;
  st.wake_id = loop_.schedule(t, [this, p] { on_wake(p); }, kSelectionPhase);
}

void Switch::on_wake(int p) {
  PortState& st = ports_[static_cast<std::size_t>(p)];
  st.wake_pending = false;
  EgressPort::Selection sel = st.port.select_next(loop_.now());
  if (sel.frame) {
    if (st.handler) st.handler(sel.frame->frame, sel.start, sel.end);
    schedule_wake(p, sel.end);
  } else if (sel.idle_until != SimTime::max()) {
    schedule_wake(p, sel.idle_until);
  }
}

SwitchCounters Switch::counters() const {
  SwitchCounters c;
  c.frames_in = frames_in_;
  c.awaiting_eligibility = awaiting_;
  c.terminated_locally = terminated_;
  for (const PortState& st : ports_) {
    c.forwarded += st.port.counters().transmitted;
    c.dropped += st.port.counters().total_dropped();
    c.queued += st.port.queued_frames();
  }
  return c;
}

}  // namespace tsnsim
