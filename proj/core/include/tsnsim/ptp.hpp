#pragma once

#include <cstdint>
#include <vector>

#include "tsnsim/clock.hpp"
#include "tsnsim/sim_time.hpp"

namespace tsnsim {

struct DeviationRecord {
  std::int64_t true_ns = 0;
  int slave_id = 0;
  /// Slave local minus grandmaster local at true_ns.
  std::int64_t deviation_ns = 0;
};

struct PtpTimestamps {
  std::int64_t t1 = 0;  // Sync departure, master clock
  std::int64_t t2 = 0;  // Sync arrival, slave clock
  std::int64_t t3 = 0;  // Delay_Req departure, slave clock
  std::int64_t t4 = 0;  // Delay_Req arrival, master clock
};

enum class PtpRole { Grandmaster, Slave };

/// Per-node PTP state. A grandmaster port only serves timestamps; a slave
/// port owns the servo that disciplines its clock.
class PtpPort {
 public:
  /// Pre: clock outlives the port; sync_rate_per_s > 0.
  PtpPort(int id, PtpRole role, DriftingClock* clock, int sync_rate_per_s, PiServoConfig servo = {});

  int id() const { return id_; }
  PtpRole role() const { return role_; }
  DriftingClock& clock() { return *clock_; }
  const DriftingClock& clock() const { return *clock_; }
  int sync_rate_per_s() const { return sync_rate_; }
  std::int64_t sync_interval_ns() const { return kNsPerSec / sync_rate_; }

  /// Slave only: consume one finished exchange at true instant `now`. Logs
  /// the deviation from `gm` as it stands before the correction, then
  /// applies the servo decision.
  DeviationRecord complete_exchange(const PtpTimestamps& ts, SimTime now, const DriftingClock& gm);
  void count_timeout(std::uint64_t n = 1) { timeouts_ += n; }

  std::int64_t last_path_delay_ns() const { return last_path_delay_ns_; }
  const std::vector<DeviationRecord>& deviation_log() const { return log_; }
  std::uint64_t timeouts() const { return timeouts_; }
  std::uint64_t anomalies() const { return anomalies_; }
  std::uint64_t rounds() const { return rounds_; }
  const PiServo& servo() const { return servo_; }

 private:
  int id_;
  PtpRole role_;
  DriftingClock* clock_;
  int sync_rate_;
  PiServo servo_;
  std::int64_t last_path_delay_ns_ = 0;
  std::vector<DeviationRecord> log_;
  std::uint64_t timeouts_ = 0;
  std::uint64_t anomalies_ = 0;
  std::uint64_t rounds_ = 0;
};

/// A direct master/slave path with fixed one-way delays (first bit sent to
/// timestamp latch at the receiver).
struct PathDescriptor {
  std::int64_t master_to_slave_ns = 8;
  std::int64_t slave_to_master_ns = 8;
  /// Slave time between Sync reception and Delay_Req departure.
  std::int64_t turnaround_ns = 20'000;
  /// Master time between Delay_Req reception and the servo running at the slave.
  std::int64_t response_ns = 1'000;
};

/// One complete Sync / Delay_Req exchange over a fixed path, starting when
/// the Sync leaves the master at `start`.
DeviationRecord ptp_sync_round(PtpPort& master, PtpPort& slave, const PathDescriptor& path, SimTime start);

}  // namespace tsnsim
