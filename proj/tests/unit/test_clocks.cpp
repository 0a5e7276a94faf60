#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "tsnsim/clock.hpp"
#include "tsnsim/error.hpp"
#include "tsnsim/ptp.hpp"
#include "tsnsim/rng.hpp"

using namespace tsnsim;

TEST(DriftingClock, IdentityClock) {
  DriftingClock c(0, 0);
  EXPECT_EQ(c.local_time(SimTime{1'000'000'000}), 1'000'000'000);
}

TEST(DriftingClock, OnePpmFast) {
  DriftingClock c(0, 1'000);
  EXPECT_EQ(c.local_time(SimTime{1'000'000'000}), 1'000'001'000);
}

TEST(DriftingClock, HundredPpmSlow) {
  DriftingClock c(0, -100'000);
  EXPECT_EQ(c.local_time(SimTime{1'000'000}), 999'900);
}

TEST(DriftingClock, OffsetIsAdded) {
  DriftingClock c(-250, 0, SimTime{10});
  // the offset applies to true time itself, not to time since start
  EXPECT_EQ(c.local_time(SimTime{110}), 110 - 250);
}

TEST(DriftingClock, RoundTripWithinOneNs) {
  Rng rng(11, "clock-inv");
  for (int i = 0; i < 2000; ++i) {
    DriftingClock c(rng.uniform_int(-1'000'000, 1'000'000), rng.uniform_int(-100'000, 100'000));
    c.set_frequency_adjustment(SimTime{1'000}, rng.uniform_int(-50'000, 50'000));
    const SimTime t{rng.uniform_int(1'000, 40'000'000'000)};
    const SimTime back = c.true_time_at(c.local_time(t));
    ASSERT_LE(std::llabs(back - t), 1) << "t=" << t.ns;
  }
}

TEST(DriftingClock, PiecewiseLinearAcrossAdjustment) {
  DriftingClock c(0, 0);
  c.set_frequency_adjustment(SimTime{1'000'000'000}, 1'000);
  EXPECT_EQ(c.local_time(SimTime{1'000'000'000}), 1'000'000'000);
  EXPECT_EQ(c.local_time(SimTime{2'000'000'000}), 2'000'001'000);
}

TEST(DriftingClock, QuantizedTo8ns) {
  DriftingClock c(0, 0);
  c.set_quantization(8);
  EXPECT_EQ(c.local_time(SimTime{15}), 8);
  EXPECT_EQ(c.local_time(SimTime{16}), 16);
}

TEST(PathDelay, SymmetricExchange) {
  EXPECT_EQ(compute_path_delay(0, 100, 200, 300).delay_ns, 100);
}

TEST(PathDelay, AllZero) {
  const PathDelay d = compute_path_delay(0, 0, 0, 0);
  EXPECT_EQ(d.delay_ns, 0);
  EXPECT_FALSE(d.anomaly);
}

TEST(PathDelay, OffsetCancels) {
  const std::int64_t t1 = 1'000, t3 = 9'000, d = 800, o = 5'000;
  EXPECT_EQ(compute_path_delay(t1, t1 + d + o, t3, t3 + d - o).delay_ns, 800);
}

TEST(PathDelay, OffsetCancelsForRandomInputs) {
  Rng rng(21, "path-delay");
  for (int i = 0; i < 100'000; ++i) {
    const std::int64_t d = rng.uniform_int(0, 10'000'000);
    const std::int64_t o = rng.uniform_int(-1'000'000'000, 1'000'000'000);
    const std::int64_t t1 = rng.uniform_int(0, 1'000'000'000'000);
    const std::int64_t t3 = t1 + rng.uniform_int(0, 1'000'000);
    ASSERT_EQ(compute_path_delay(t1, t1 + d + o, t3, t3 + d - o).delay_ns, d);
    ASSERT_EQ(compute_offset(t1, t1 + d + o, t3, t3 + d - o), o);
  }
}

TEST(PathDelay, NegativeEstimateIsFlaggedNotDropped) {
  const PathDelay d = compute_path_delay(0, -500, 1'000, 900);
  EXPECT_EQ(d.delay_ns, -300);
  EXPECT_TRUE(d.anomaly);
}

TEST(PathDelay, HalvingRoundsToEven) {
  EXPECT_EQ(halve_round_even(3), 2);
  EXPECT_EQ(halve_round_even(5), 2);
  EXPECT_EQ(halve_round_even(-3), -2);
  EXPECT_EQ(halve_round_even(-5), -2);
  EXPECT_EQ(halve_round_even(7), 4);
}

TEST(PiServo, ZeroErrorGivesZero) {
  PiServo s;
  EXPECT_EQ(s.step(0, 62'500'000), 0);
}

TEST(PiServo, ProportionalGainFollowsExponentLaw) {
  PiServo s;
  // 16 sync/s: 0.7 * 0.0625^-0.3 = 1.6077; the norm_max bound is 11.2
  EXPECT_NEAR(s.proportional_gain(62'500'000), 0.7 * std::pow(0.0625, -0.3), 1e-12);
  // 1 sync per 10 s: norm_max / T wins
  EXPECT_NEAR(s.proportional_gain(10'000'000'000), 0.07, 1e-12);
}

TEST(PiServo, IntegralGrowsMonotonicallyUntilClamp) {
  PiServoConfig cfg;
  cfg.max_freq_adj_ppb = 100'000;
  PiServo s(cfg);
  double last = 0.0;
  bool clamped = false;
  for (int i = 0; i < 100'000 && !clamped; ++i) {
    const std::int64_t out = s.step(20'000, 62'500'000);
    ASSERT_LE(std::llabs(out), cfg.max_freq_adj_ppb);
    clamped = s.last_clamped();
    if (!clamped) {
      ASSERT_GT(std::abs(s.integral_ppb()), std::abs(last));
      last = s.integral_ppb();
    }
  }
  EXPECT_TRUE(clamped);
}

TEST(PiServo, OutputAlwaysWithinClamp) {
  PiServo s;
  Rng rng(4, "servo-clamp");
  for (int i = 0; i < 10'000; ++i) {
    const std::int64_t out = s.step(rng.uniform_int(-4'000'000'000'000, 4'000'000'000'000), 62'500'000);
    ASSERT_LE(std::llabs(out), 900'000'000);
  }
}

namespace {

struct Pair {
  DriftingClock gm_clock{0, 0};
  DriftingClock slave_clock;
  PtpPort gm;
  PtpPort slave;
  Pair(std::int64_t offset, std::int64_t drift, int rate)
      : slave_clock(offset, drift),
        gm(0, PtpRole::Grandmaster, &gm_clock, rate),
        slave(1, PtpRole::Slave, &slave_clock, rate) {}
};

// Runs rounds for [from, to) of true time at the slave's sync rate.
std::int64_t run_rounds(Pair& p, std::int64_t from_ns, std::int64_t to_ns, std::int64_t measure_from_ns) {
  std::int64_t worst = 0;
  for (std::int64_t t = from_ns; t < to_ns; t += p.slave.sync_interval_ns()) {
    const DeviationRecord r = ptp_sync_round(p.gm, p.slave, PathDescriptor{}, SimTime{t});
    if (r.true_ns >= measure_from_ns) worst = std::max(worst, static_cast<std::int64_t>(std::llabs(r.deviation_ns)));
  }
  return worst;
}

}  // namespace

TEST(PtpSync, ZeroDriftSettlesToZero) {
  Pair p(0, 0, 16);
  EXPECT_LE(run_rounds(p, 0, 5'000'000'000, 1'000'000'000), 1);
}

TEST(PtpSync, GrandmasterDeviationToItselfIsZero) {
  DriftingClock gm(0, 0);
  EXPECT_EQ(gm.local_time(SimTime{123'456'789}) - gm.local_time(SimTime{123'456'789}), 0);
  PtpPort master(0, PtpRole::Grandmaster, &gm, 16);
  EXPECT_THROW(master.complete_exchange(PtpTimestamps{}, SimTime{0}, gm), ConfigError);
}

TEST(PtpSync, FiftyPpmSlaveWithinThirtyNs) {
  Pair p(800'000, 50'000, 16);
  EXPECT_LE(run_rounds(p, 0, 30'000'000'000, 5'000'000'000), 30);
}

TEST(PtpSync, StepResponseDecaysWithinTwoSeconds) {
  Pair p(0, 0, 16);
  run_rounds(p, 0, 2'000'000'000, 0);
  p.slave_clock.step(SimTime{2'000'000'000}, 1'000);
  std::vector<DeviationRecord> after;
  for (std::int64_t t = 2'000'000'000; t < 6'000'000'000; t += p.slave.sync_interval_ns()) {
    after.push_back(ptp_sync_round(p.gm, p.slave, PathDescriptor{}, SimTime{t}));
  }
  EXPECT_GE(std::llabs(after.front().deviation_ns), 900);
  for (const auto& r : after) {
    if (r.true_ns >= 4'000'000'000) {
      ASSERT_LT(std::llabs(r.deviation_ns), 50) << "at " << r.true_ns;
    }
  }
}

TEST(PtpSync, HigherSyncRateNeverLoosensTheBound) {
  std::int64_t previous = std::numeric_limits<std::int64_t>::max();
  for (int rate : {8, 16, 32, 64, 128}) {
    Pair p(300'000, 50'000, rate);
    const std::int64_t bound = run_rounds(p, 0, 30'000'000'000, 5'000'000'000);
    EXPECT_LE(bound, previous) << "rate " << rate;
    previous = bound;
  }
}

TEST(PtpSync, DriftBoundsAcrossPaperRange) {
  for (std::int64_t drift : {-100'000, -50'000, 0, 50'000, 100'000}) {
    Pair p(-400'000, drift, 16);
    EXPECT_LE(run_rounds(p, 0, 15'000'000'000, 5'000'000'000), 30) << "drift " << drift;
  }
}
