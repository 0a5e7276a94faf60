#include "tsnsim/clock.hpp"

#include <algorithm>
#include <cmath>

#include "int128.hpp"

namespace tsnsim {
namespace {

using detail::int128;

/// Division rounding to nearest, ties away from zero.
std::int64_t div_round(int128 num, int128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num >= 0) return static_cast<std::int64_t>((num + den / 2) / den);
  return -static_cast<std::int64_t>((-num + den / 2) / den);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

DriftingClock::DriftingClock(std::int64_t base_offset_ns, std::int64_t drift_ppb, SimTime start)
    : natural_drift_ppb_(drift_ppb), anchor_true_(start), anchor_local_(start.ns + base_offset_ns) {}

std::int64_t DriftingClock::raw_local(SimTime true_now) const {
  const std::int64_t elapsed = true_now - anchor_true_;
  const int128 skew = static_cast<int128>(elapsed) * rate_ppb();
  return anchor_local_ + elapsed + div_round(skew, kNsPerSec);
}

std::int64_t DriftingClock::local_time(SimTime true_now) const {
  const std::int64_t raw = raw_local(true_now);
  if (quantum_ns_ > 1) return floor_div(raw, quantum_ns_) * quantum_ns_;
  return raw;
}

SimTime DriftingClock::true_time_at(std::int64_t local_ns) const {
  const std::int64_t local_elapsed = local_ns - anchor_local_;
  const int128 den = static_cast<int128>(kNsPerSec) + rate_ppb();
  SimTime guess{anchor_true_.ns + div_round(static_cast<int128>(local_elapsed) * kNsPerSec, den)};
  // Settle on the earliest instant whose raw reading reaches the target.
  while (raw_local(guess) < local_ns) guess += 1;
  while (guess.ns > anchor_true_.ns && raw_local(guess - 1) >= local_ns) guess = guess - 1;
  return guess;
}

void DriftingClock::reanchor(SimTime true_now) {
  anchor_local_ = raw_local(true_now);
  anchor_true_ = true_now;
}

void DriftingClock::set_frequency_adjustment(SimTime true_now, std::int64_t adj_ppb) {
  reanchor(true_now);
  adjustment_ppb_ = adj_ppb;
}

void DriftingClock::step(SimTime true_now, std::int64_t delta_ns) {
  reanchor(true_now);
  anchor_local_ += delta_ns;
}

std::int64_t halve_round_even(std::int64_t v) {
  const std::int64_t q = floor_div(v, 2);
  if (v % 2 == 0) return q;
  // v = 2q + 1: exactly halfway between q and q + 1.
  return (q % 2 == 0) ? q : q + 1;
}

PathDelay compute_path_delay(std::int64_t t1, std::int64_t t2, std::int64_t t3, std::int64_t t4) {
  const std::int64_t d = halve_round_even((t2 - t1) + (t4 - t3));
  return PathDelay{d, d < 0};
}

std::int64_t compute_offset(std::int64_t t1, std::int64_t t2, std::int64_t t3, std::int64_t t4) {
  return halve_round_even((t2 - t1) - (t4 - t3));
}

double PiServo::proportional_gain(std::int64_t interval_ns) const {
  const double interval_s = static_cast<double>(interval_ns) / 1e9;
  return std::min(cfg_.kp_scale * std::pow(interval_s, cfg_.kp_exponent), cfg_.norm_max / interval_s);
}

std::int64_t PiServo::step(std::int64_t offset_error_ns, std::int64_t interval_ns) {
  const double interval_s = static_cast<double>(interval_ns) / 1e9;
  const double kp = proportional_gain(interval_ns);
  const double e = static_cast<double>(offset_error_ns);
  const double ki_term = cfg_.ki * e * interval_s;
  const double limit = static_cast<double>(cfg_.max_freq_adj_ppb);
  double ppb = kp * e + integral_ppb_ + ki_term;
  last_clamped_ = false;
  if (ppb > limit) {
    ppb = limit;
    last_clamped_ = true;
  } else if (ppb < -limit) {
    ppb = -limit;
    last_clamped_ = true;
  } else {
    integral_ppb_ += ki_term;
  }
  if (last_clamped_) ++clamp_count_;
  return -static_cast<std::int64_t>(std::llround(ppb));
}

PiServo::Decision PiServo::sample(std::int64_t offset_ns, std::int64_t local_ts_ns, std::int64_t interval_ns) {
  Decision d;
  if (state_ == State::Locked) {
    d.state = state_;
    d.apply_frequency = true;
    d.freq_adj_ppb = step(offset_ns, interval_ns);
    return d;
  }
  if (samples_ == 0) {
    first_offset_ns_ = offset_ns;
    first_local_ns_ = local_ts_ns;
    samples_ = 1;
    d.state = state_;
    return d;
  }
  const std::int64_t dt = local_ts_ns - first_local_ns_;
  if (dt > 0 && dt < cfg_.lock_baseline_ns) {
    d.state = state_;
    return d;
  }
  if (dt <= 0) {
    first_offset_ns_ = offset_ns;
    first_local_ns_ = local_ts_ns;
    d.state = state_;
    return d;
  }
  // Frequency error relative to the current adjustment, in ppb.
  const double drift = static_cast<double>(offset_ns - first_offset_ns_) * 1e9 / static_cast<double>(dt);
  const double limit = static_cast<double>(cfg_.max_freq_adj_ppb);
  integral_ppb_ = std::clamp(integral_ppb_ + drift, -limit, limit);
  state_ = State::Locked;
  samples_ = 0;
  d.state = state_;
  d.apply_frequency = true;
  d.freq_adj_ppb = -static_cast<std::int64_t>(std::llround(integral_ppb_));
  if (std::llabs(offset_ns) > cfg_.lock_step_threshold_ns) d.step_ns = -offset_ns;
  return d;
}

void PiServo::reset() {
  state_ = State::Unlocked;
  integral_ppb_ = 0.0;
  samples_ = 0;
  last_clamped_ = false;
}

}  // namespace tsnsim
