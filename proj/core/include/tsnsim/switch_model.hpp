#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tsnsim/egress_port.hpp"
#include "tsnsim/event_loop.hpp"
#include "tsnsim/frame.hpp"

namespace tsnsim {

/// Egress-port decisions run in this event phase, after every arrival due at
/// the same instant.
inline constexpr int kSelectionPhase = 1;

struct SwitchCounters {
  std::uint64_t frames_in = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t dropped = 0;
  std::uint64_t awaiting_eligibility = 0;
  std::uint64_t queued = 0;
  std::uint64_t terminated_locally = 0;

  std::uint64_t in_flight() const { return awaiting_eligibility + queued; }
};

/// The DuT: a set of egress ports driven by the event loop. Propagation
/// delay is zero, so the first bit leaving an egress port is the first bit
/// reaching the attached node.
class Switch {
 public:
  /// Called when a frame's first bit leaves egress port `port`.
  using TxHandler = std::function<void(const Frame& frame, SimTime start, SimTime end)>;
  /// Called for frames addressed to the switch itself at first-bit arrival.
  using LocalHandler = std::function<void(const Frame& frame, SimTime first_bit)>;

  static constexpr int kToSwitch = -1;

  Switch(EventLoop& loop, std::vector<EgressConfig> ports);

  void on_transmit(int port, TxHandler handler);
  void on_local(LocalHandler handler) { local_ = std::move(handler); }

  /// First bit of `frame` reaches an ingress at loop.now().
  void receive(const Frame& frame, int egress_port, std::int64_t ingress_rate_bps);
  /// Frame generated by the switch itself; joins its queue immediately.
  void inject(const Frame& frame, int egress_port);

  EgressPort& port(int i) { return ports_[static_cast<std::size_t>(i)].port; }
  const EgressPort& port(int i) const { return ports_[static_cast<std::size_t>(i)].port; }
  int num_ports() const { return static_cast<int>(ports_.size()); }

  SwitchCounters counters() const;

 private:
  struct PortState {
    explicit PortState(EgressConfig cfg) : port(std::move(cfg)) {}
    EgressPort port;
    TxHandler handler;
    bool wake_pending = false;
    SimTime wake_at{};
    EventId wake_id = 0;
  };

  void admit(const Frame& frame, int egress_port);
  void schedule_wake(int p, SimTime t);
  void on_wake(int p);

  EventLoop& loop_;
  std::vector<PortState> ports_;
  LocalHandler local_;
  std::uint64_t frames_in_ = 0;
  std::uint64_t awaiting_ = 0;
  std::uint64_t terminated_ = 0;
};

}  // namespace tsnsim
