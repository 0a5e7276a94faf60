#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsnsim/egress_port.hpp"
#include "tsnsim/ptp.hpp"
#include "tsnsim/stats.hpp"
#include "tsnsim/switch_model.hpp"

namespace tsnsim {

/// One delivered measurement frame. tx is the sender's clock at the first
/// bit on the wire, rx the sink's clock at the first byte received.
struct LatencyRecord {
  int stream = 0;
  std::int64_t seq = 0;
  std::int64_t tx_ns = 0;
  std::int64_t rx_ns = 0;
  std::int64_t latency_ns = 0;
  std::int64_t frame_bytes = 0;

  bool operator==(const LatencyRecord&) const = default;
};

struct StreamResult {
  std::string name;
  int pcp = 0;
  std::uint64_t emitted = 0;
  std::uint64_t sender_drops = 0;
  std::uint64_t switch_drops = 0;
  /// Records in sink arrival order.
  std::vector<LatencyRecord> records;
  std::optional<SummaryStats> stats;

  std::vector<std::int64_t> latencies() const;
};

struct PtpResult {
  bool enabled = false;
  int sync_rate_per_s = 0;
  std::vector<DeviationRecord> deviations;
  /// Largest |deviation| inside the measurement window.
  std::int64_t max_abs_deviation_ns = 0;
  std::uint64_t timeouts = 0;
  std::uint64_t anomalies = 0;
  std::vector<std::int64_t> slave_drift_ppb;
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  /// Seed of the accepted attempt (differs from seed after retries).
  std::uint64_t attempt_seed = 0;
  int retry_count = 0;
  std::int64_t measurement_start_ns = 0;
  std::int64_t measurement_end_ns = 0;
  std::vector<StreamResult> streams;
  PtpResult ptp;
  SwitchCounters counters;
  std::uint64_t cross_emitted = 0;
  std::uint64_t cross_sender_drops = 0;
  std::uint64_t events = 0;
  /// Departure log of the sink-facing port, when requested.
  std::vector<Departure> port_log;
  std::vector<std::string> warnings;

  /// Recomputes per-stream stats from records.
  void finalize();
};

}  // namespace tsnsim
