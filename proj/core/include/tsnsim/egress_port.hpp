#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "tsnsim/frame.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/sim_time.hpp"

namespace tsnsim {

enum class SelectionPolicy { None, Spq, Tas };
SelectionPolicy parse_selection(std::string_view name);
std::string_view to_string(SelectionPolicy p);

struct EgressConfig {
  std::int64_t link_rate_bps = 1'000'000'000;
  SelectionPolicy selection = SelectionPolicy::Spq;
  /// Required when selection is Tas.
  std::optional<Gcl> gcl;
  std::int64_t shared_buffer_bytes = 18'000;
  /// Dynamic-threshold admission: a queue accepts a frame only while its
  /// occupancy is below alpha * (free buffer). <= 0 disables the threshold
  /// (plain tail drop on the shared pool). Under selection none the port is
  /// one queue for this purpose.
  double buffer_alpha = 2.0;
  std::int64_t cut_through_threshold_bytes = 337;
  std::int64_t processing_delay_ns = 2'190;
  /// Tas only: start a frame only if it finishes before its gate closes.
  bool length_check = false;
};

struct QueuedFrame {
  Frame frame;
  SimTime enqueued{};
  std::uint64_t enqueue_seq = 0;
};

/// One started transmission, as logged for property checks.
struct Departure {
  std::uint64_t uid = 0;
  FrameKind kind = FrameKind::Stream;
  int queue = 0;
  int stream = -1;
  std::int64_t seq = 0;
  SimTime enqueued{};
  SimTime start{};
  SimTime end{};
  /// Highest queue index holding a waiting frame when this one was picked
  /// (including the picked one); -1 if not recorded.
  int highest_waiting = -1;
  std::uint64_t enqueue_seq = 0;
};

struct PortCounters {
  std::uint64_t enqueued = 0;
  std::uint64_t transmitted = 0;
  std::array<std::uint64_t, kNumQueues> dropped{};
  std::uint64_t total_dropped() const;
};

/// 8-queue egress port with a shared tail-drop buffer. Frames enter their
/// queue at their cut-through eligibility instant; their bytes stay in the
/// buffer until their transmission ends. The port knows nothing about the
/// event loop; a driver calls select_next whenever it may start sending.
class EgressPort {
 public:
  explicit EgressPort(EgressConfig cfg);

  const EgressConfig& config() const { return cfg_; }

  static int classify(const Frame& frame) { return frame.pcp; }

  /// Earliest instant the frame may be forwarded given its first bit reached
  /// the ingress at arrival_first_bit.
  SimTime cut_through_eligible_time(const Frame& frame, SimTime arrival_first_bit,
                                    std::int64_t ingress_rate_bps) const;

  /// Tail drop: returns false (and counts) when the frame does not fit.
  bool enqueue(const Frame& frame, SimTime t);

  struct Selection {
    std::optional<QueuedFrame> frame;
    int queue = -1;
    SimTime start{};
    SimTime end{};
    /// When nothing was selectable: next instant the decision may change
    /// without a new arrival (SimTime::max() if none).
    SimTime idle_until = SimTime::max();
  };

  /// Pre: t >= busy_until(). Picks and starts at most one frame at t.
  Selection select_next(SimTime t);

  SimTime busy_until() const { return busy_until_; }
  std::int64_t buffered_bytes() const { return buffered_bytes_; }
  /// Bytes held for queue q, including a frame of q in transmission.
  std::int64_t queue_bytes(int q) const { return queue_bytes_[static_cast<std::size_t>(q)]; }
  std::size_t queued_frames() const;
  std::size_t queue_length(int q) const { return queues_[static_cast<std::size_t>(q)].size(); }
  const PortCounters& counters() const { return counters_; }

  void set_logging(bool on) { logging_ = on; }
  const std::vector<Departure>& log() const { return log_; }

 private:
  void release_finished(SimTime t);
  std::optional<int> pick_queue(SimTime t, SimTime* idle_until) const;

  EgressConfig cfg_;
  std::array<std::deque<QueuedFrame>, kNumQueues> queues_;
  std::int64_t buffered_bytes_ = 0;
  SimTime busy_until_{};
  std::int64_t in_service_bytes_ = 0;
  int in_service_queue_ = 0;
  std::array<std::int64_t, kNumQueues> queue_bytes_{};
  std::uint64_t next_enqueue_seq_ = 0;
  PortCounters counters_;
  bool logging_ = false;
  std::vector<Departure> log_;
};

}  // namespace tsnsim
