#pragma once

#include <cstdint>

#include "tsnsim/sim_time.hpp"

namespace tsnsim {

/// Free-running oscillator with a constant natural drift plus a
/// servo-controlled frequency adjustment. Local time is piecewise linear in
/// true time; every rate change or phase step starts a new segment.
class DriftingClock {
 public:
  DriftingClock() = default;
  DriftingClock(std::int64_t base_offset_ns, std::int64_t drift_ppb, SimTime start = {});

  /// Pre: true_now >= anchor of the current segment.
  std::int64_t local_time(SimTime true_now) const;
  /// Earliest true instant whose local reading is >= local_ns (current segment).
  SimTime true_time_at(std::int64_t local_ns) const;

  void set_frequency_adjustment(SimTime true_now, std::int64_t adj_ppb);
  void step(SimTime true_now, std::int64_t delta_ns);
  /// Mimics NICs whose counter advances in fixed increments (e.g. 8 ns); 0 = ideal.
  void set_quantization(std::int64_t step_ns) { quantum_ns_ = step_ns; }

  std::int64_t rate_ppb() const { return natural_drift_ppb_ + adjustment_ppb_; }
  std::int64_t natural_drift_ppb() const { return natural_drift_ppb_; }
  std::int64_t adjustment_ppb() const { return adjustment_ppb_; }
  SimTime anchor() const { return anchor_true_; }

 private:
  std::int64_t raw_local(SimTime true_now) const;
  void reanchor(SimTime true_now);

  std::int64_t natural_drift_ppb_ = 0;
  std::int64_t adjustment_ppb_ = 0;
  SimTime anchor_true_{};
  std::int64_t anchor_local_ = 0;
  std::int64_t quantum_ns_ = 0;
};

struct PathDelay {
  std::int64_t delay_ns = 0;
  /// Negative estimate; kept for the record rather than discarded.
  bool anomaly = false;
};

/// Mean path delay from one sync/delay-request exchange:
/// ((t2 - t1) + (t4 - t3)) / 2 with round-half-to-even.
PathDelay compute_path_delay(std::int64_t t1, std::int64_t t2, std::int64_t t3, std::int64_t t4);

/// Slave-minus-master offset from the same four timestamps, same rounding.
std::int64_t compute_offset(std::int64_t t1, std::int64_t t2, std::int64_t t3, std::int64_t t4);

std::int64_t halve_round_even(std::int64_t v);

struct PiServoConfig {
  double kp_scale = 0.7;
  double kp_exponent = -0.3;
  double norm_max = 0.7;
  /// Integral gain per second of sync interval: integral += ki * offset * interval_s.
  double ki = 0.05;
  std::int64_t max_freq_adj_ppb = 900'000'000;
  /// At lock acquisition, offsets with magnitude above this are removed by a
  /// phase step (0: always step).
  std::int64_t lock_step_threshold_ns = 0;
  /// Minimum local-time separation of the two samples behind the lock-time
  /// frequency estimate; timestamp rounding over a short baseline would
  /// leave a frequency error the slow integrator needs tens of seconds to remove.
  std::int64_t lock_baseline_ns = 1'000'000'000;
};

/// PI clock servo in the style of linuxptp's pi servo: exponent-scaled
/// proportional gain, integral accumulator with anti-windup at the clamp,
/// and a two-sample frequency estimate before locking.
class PiServo {
 public:
  enum class State { Unlocked, Locked };

  struct Decision {
    State state = State::Unlocked;
    bool apply_frequency = false;
    std::int64_t freq_adj_ppb = 0;
    std::int64_t step_ns = 0;
  };

  explicit PiServo(PiServoConfig cfg = {}) : cfg_(cfg) {}

  double proportional_gain(std::int64_t interval_ns) const;

  /// The PI law. offset_error_ns is slave minus master; the returned
  /// adjustment steers the slave toward the master and is clamped.
  std::int64_t step(std::int64_t offset_error_ns, std::int64_t interval_ns);

  /// Full sample handling including lock acquisition.
  Decision sample(std::int64_t offset_ns, std::int64_t local_ts_ns, std::int64_t interval_ns);

  void reset();

  State state() const { return state_; }
  double integral_ppb() const { return integral_ppb_; }
  bool last_clamped() const { return last_clamped_; }
  std::uint64_t clamp_count() const { return clamp_count_; }
  const PiServoConfig& config() const { return cfg_; }

 private:
  PiServoConfig cfg_;
  State state_ = State::Unlocked;
  double integral_ppb_ = 0.0;
  int samples_ = 0;
  std::int64_t first_offset_ns_ = 0;
  std::int64_t first_local_ns_ = 0;
  bool last_clamped_ = false;
  std::uint64_t clamp_count_ = 0;
};

}  // namespace tsnsim
