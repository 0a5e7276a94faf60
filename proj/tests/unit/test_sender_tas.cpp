#include <gtest/gtest.h>

#include "tsnsim/error.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/orchestrator.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/sender_tas.hpp"
#include "tsnsim/stats.hpp"
#include "tsnsim/traffic.hpp"

using namespace tsnsim;

TEST(DeriveSchedule, AlwaysOpenQueueStaysOpen) {
  const SenderSchedule s = derive_sender_schedule(make_gcl(2, 15'000, false), kQueueHigh, 4'786);
  EXPECT_TRUE(s.always_open());
  EXPECT_EQ(etf_release(s, 123'457, 12'336), 123'457);
}

TEST(DeriveSchedule, ShiftedByAdvance) {
  const SenderSchedule s = derive_sender_schedule(make_gcl(1, 15'000, true), kQueueHigh, 5'000);
  EXPECT_EQ(s.cycle_ns(), 75'000);
  ASSERT_EQ(s.windows().size(), 1u);
  // [-5, 10) us modulo 75 us
  EXPECT_EQ(s.windows()[0].start, 70'000);
  EXPECT_EQ(s.windows()[0].end, 85'000);
  EXPECT_TRUE(s.is_open(0));
  EXPECT_TRUE(s.is_open(9'999));
  EXPECT_FALSE(s.is_open(10'000));
  EXPECT_FALSE(s.is_open(69'999));
  EXPECT_TRUE(s.is_open(70'000));
}

TEST(DeriveSchedule, DilationFillsTheCycle) {
  const Gcl gcl({{static_cast<GateMask>(1U << kQueueHigh), 15'000}, {0, 135'000}});
  const SenderSchedule s = derive_sender_schedule(gcl, kQueueHigh, 0, 10);
  EXPECT_EQ(s.cycle_ns(), 150'000);
  EXPECT_TRUE(s.always_open());
}

TEST(DeriveSchedule, DilationStretchesWindow) {
  const Gcl gcl({{static_cast<GateMask>(1U << kQueueHigh), 15'000}, {0, 285'000}});
  const SenderSchedule s = derive_sender_schedule(gcl, kQueueHigh, 0, 10);
  ASSERT_EQ(s.windows().size(), 1u);
  EXPECT_EQ(s.windows()[0].end - s.windows()[0].start, 150'000);
}

TEST(DeriveSchedule, NeverOpenQueueRejected) {
  EXPECT_THROW(derive_sender_schedule(make_gcl(1, 15'000, false), 3, 0), ConfigError);
  EXPECT_THROW(derive_sender_schedule(make_gcl(1, 15'000, false), kQueueHigh, -1), ConfigError);
  EXPECT_THROW(derive_sender_schedule(make_gcl(1, 15'000, false), kQueueHigh, 0, 0), ConfigError);
}

TEST(EtfRelease, InsideWindowReleasesAtDesiredTime) {
  const SenderSchedule s(60'000, 0, {{0, 15'000}});
  EXPECT_EQ(etf_release(s, 3'000), 3'000);
}

TEST(EtfRelease, JustAfterCloseWaitsForNextWindow) {
  const SenderSchedule s(60'000, 0, {{0, 15'000}});
  EXPECT_EQ(etf_release(s, 15'000), 60'000);
  EXPECT_EQ(etf_release(s, 15'001), 60'000);
}

TEST(EtfRelease, FrameMustFitBeforeClose) {
  const SenderSchedule s(60'000, 0, {{0, 15'000}});
  EXPECT_EQ(etf_release(s, 2'664, 12'336), 2'664);
  EXPECT_EQ(etf_release(s, 2'665, 12'336), 60'000);
  EXPECT_EQ(etf_release(s, 0, 20'000), kNever);
}

TEST(EtfRelease, ReleasesNeverPrecedeDesired) {
  const SenderSchedule s = derive_sender_schedule(make_gcl(4, 15'000, true), kQueueHigh, 4'786);
  for (std::int64_t t = -200'000; t < 400'000; t += 997) {
    const std::int64_t r = etf_release(s, t, 12'336);
    ASSERT_GE(r, t);
    ASSERT_TRUE(s.is_open(r));
    ASSERT_TRUE(s.is_open(r + 12'335));
  }
}

TEST(HoldBuffer, ReleasesInTargetOrder) {
  HoldBuffer hb;
  Frame a, b;
  a.seq = 1;
  b.seq = 2;
  hb.push(5'000, b);
  hb.push(1'000, a);
  EXPECT_EQ(hb.front_target(), 1'000);
  EXPECT_EQ(hb.pop().seq, 1);
  EXPECT_EQ(hb.pop().seq, 2);
  EXPECT_TRUE(hb.empty());
}

TEST(HoldBuffer, EqualTargetsKeepInsertionOrder) {
  HoldBuffer hb;
  for (int i = 0; i < 5; ++i) {
    Frame f;
    f.seq = i;
    hb.push(100, f);
  }
  for (int i = 0; i < 5; ++i) EXPECT_EQ(hb.pop().seq, i);
}

TEST(HoldBuffer, OverflowIsCounted) {
  HoldBuffer hb(2);
  Frame f;
  EXPECT_TRUE(hb.push(1, f));
  EXPECT_TRUE(hb.push(2, f));
  EXPECT_FALSE(hb.push(3, f));
  EXPECT_EQ(hb.dropped(), 1u);
  EXPECT_EQ(hb.size(), 2u);
}

namespace {

std::int64_t high_p999(bool sender_tas) {
  ScenarioConfig cfg = bundled_scenario("txinject");
  cfg.duration_s = 1.0;
  cfg.ptp.warmup_s = 2.0;
  cfg.sender_tas.enabled = sender_tas;
  const RunResult r = run_scenario(cfg);
  return r.streams.at(0).stats->p999;
}

}  // namespace

TEST(SenderTasEndToEnd, DisablingSenderTasDegradesTail) { EXPECT_LT(high_p999(true), high_p999(false)); }

TEST(SenderTasEndToEnd, ProtectedStreamSeesNoQueueing) {
  ScenarioConfig cfg = bundled_scenario("txinject");
  cfg.duration_s = 1.0;
  cfg.ptp.warmup_s = 2.0;
  cfg.jitter = "ideal";
  cfg.record_port_log = true;
  const RunResult r = run_scenario(cfg);
  std::size_t checked = 0, zero = 0;
  const auto& log = r.port_log;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& d = log[i];
    if (d.kind != FrameKind::Stream || d.queue != kQueueHigh) continue;
    ++checked;
    if (d.start == d.enqueued) {
      ++zero;
      continue;
    }
    // Only in-band PTP frames (queue 7, always open) can block; a frame the
    // sender released back to back behind one of those then waits as well.
    for (std::size_t k = i; k-- > 0 && log[k].end > d.enqueued;) {
      ASSERT_TRUE(is_ptp(log[k].kind) || log[k].queue == kQueueHigh) << "seq " << d.seq << " enqueued " << d.enqueued.ns << " waited behind kind "
                                          << static_cast<int>(log[k].kind) << " queue " << log[k].queue << " ["
                                          << log[k].start.ns << ", " << log[k].end.ns << ")";
    }
  }
  EXPECT_GT(checked, 4'000u);
  EXPECT_GE(zero, checked - 5);
}
