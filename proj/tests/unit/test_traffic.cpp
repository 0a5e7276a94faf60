#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "tsnsim/error.hpp"
#include "tsnsim/traffic.hpp"

using namespace tsnsim;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("tsnsim_test_" + name);
  std::ofstream(path) << content;
  return path;
}

double sample_stddev(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

TEST(Serialization, FullFrameAtGigabit) { EXPECT_EQ(serialization_time(1522, 1'000'000'000), 12'336); }

TEST(Serialization, MinimumFrame) { EXPECT_EQ(serialization_time(64, 1'000'000'000), 672); }

TEST(Serialization, VanishesAtHugeRate) {
  EXPECT_EQ(serialization_time(1522, std::numeric_limits<std::int64_t>::max()), 0);
}

TEST(Serialization, RoundsToNearest) {
  // 84 * 8 / 3 = 224 exactly, 85 * 8 / 3 = 226.67
  EXPECT_EQ(serialization_time(64, 3'000'000'000), 224);
  EXPECT_EQ(serialization_time(65, 3'000'000'000), 227);
}

TEST(StreamSets, ThetaCycleTimes) {
  const auto set = build_stream_set(StreamSetId::Theta);
  ASSERT_EQ(set.size(), 3u);
  EXPECT_EQ(set[0].cycle_ns, 200'000);
  EXPECT_EQ(set[1].cycle_ns, 300'000);
  EXPECT_EQ(set[2].cycle_ns, 500'000);
  EXPECT_EQ(set[0].pcp, 6);
  EXPECT_EQ(set[1].pcp, 5);
  EXPECT_EQ(set[2].pcp, 4);
  for (const auto& s : set) EXPECT_EQ(s.payload.mean, 1472.0);
}

TEST(StreamSets, PsiTactile) {
  const auto set = build_stream_set(StreamSetId::Psi);
  EXPECT_EQ(set[0].pcp, 6);
  EXPECT_EQ(set[0].cycle_ns, 1'000'000);
  EXPECT_EQ(set[0].payload.kind, PayloadModel::Kind::Fixed);
  EXPECT_EQ(set[0].payload.mean, 82.0);
}

TEST(StreamSets, UnknownSetIsRejected) { EXPECT_THROW(parse_stream_set("delta"), ConfigError); }

TEST(StreamSets, BitratesMatchTableWithinTenPercent) {
  for (StreamSetId id : {StreamSetId::Theta, StreamSetId::Psi, StreamSetId::Omega}) {
    const auto set = build_stream_set(id);
    const auto table = table_bitrates(id);
    for (std::size_t i = 0; i < set.size(); ++i) {
      Rng rng(17, "bitrate/" + set[i].name);
      const std::int64_t duration = 100 * kNsPerSec;
      const auto sched = generate_schedule(set[i], duration, rng);
      double bits = 0;
      for (const auto& f : sched) bits += static_cast<double>(f.on_wire_bytes) * 8.0;
      const double rate = bits / 100.0;
      EXPECT_NEAR(rate / static_cast<double>(table[i]), 1.0, 0.10) << set[i].name;
    }
  }
}

TEST(Schedule, ThetaHighOneMillisecond) {
  auto spec = build_stream_set(StreamSetId::Theta)[0];
  Rng rng(1, "x");
  const auto sched = generate_schedule(spec, 1'000'000, rng);
  ASSERT_EQ(sched.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) {
    EXPECT_EQ(sched[k].emit_ns, static_cast<std::int64_t>(k) * 200'000);
    EXPECT_EQ(sched[k].on_wire_bytes, 1522);
  }
}

TEST(Schedule, IdealJitterHasZeroCycleVariance) {
  auto spec = build_stream_set(StreamSetId::Theta)[1];
  spec.start_offset_ns = 12'345;
  Rng rng(2, "x");
  const auto sched = generate_schedule(spec, 1'000'000'000, rng);
  for (std::size_t k = 1; k < sched.size(); ++k) ASSERT_EQ(sched[k].emit_ns - sched[k - 1].emit_ns, 300'000);
  EXPECT_EQ(sched.front().emit_ns, 12'345);
}

TEST(Schedule, DpdkJitterStddev) {
  auto spec = build_stream_set(StreamSetId::Theta)[0];
  spec.jitter = JitterProfile::preset("dpdk");
  Rng rng(3, "jitter");
  const auto sched = generate_schedule(spec, 100'001 * spec.cycle_ns, rng);
  std::vector<double> dev;
  for (std::size_t k = 1; k < sched.size(); ++k) {
    dev.push_back(static_cast<double>(sched[k].emit_ns - sched[k - 1].emit_ns - spec.cycle_ns));
  }
  ASSERT_GE(dev.size(), 100'000u);
  const double sd = sample_stddev(dev);
  EXPECT_GE(sd, 125.0);
  EXPECT_LE(sd, 153.0);
}

TEST(Schedule, JitterNeverReordersEmissions) {
  for (const char* preset : {"dpdk", "socket", "sender-tas"}) {
    StreamSpec spec;
    spec.name = "tight";
    spec.cycle_ns = 20'000;
    spec.payload = PayloadModel::fixed(100);
    spec.jitter = JitterProfile::preset(preset);
    Rng rng(4, preset);
    const auto sched = generate_schedule(spec, 2'000'000'000, rng);
    for (std::size_t k = 1; k < sched.size(); ++k) ASSERT_GT(sched[k].emit_ns, sched[k - 1].emit_ns) << preset;
  }
}

TEST(Schedule, SameSpecAndSeedRepeat) {
  const auto spec = build_stream_set(StreamSetId::Omega)[2];
  Rng a(9, "s"), b(9, "s");
  const auto x = generate_schedule(spec, 2 * kNsPerSec, a);
  const auto y = generate_schedule(spec, 2 * kNsPerSec, b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ASSERT_EQ(x[i].emit_ns, y[i].emit_ns);
    ASSERT_EQ(x[i].payload_bytes, y[i].payload_bytes);
  }
}

TEST(Schedule, PayloadsStayInRange) {
  for (StreamSetId id : {StreamSetId::Psi, StreamSetId::Omega}) {
    for (const auto& spec : build_stream_set(id)) {
      Rng rng(5, spec.name);
      for (const auto& f : generate_schedule(spec, 5 * kNsPerSec, rng)) {
        ASSERT_GE(f.payload_bytes, 1);
        ASSERT_LE(f.payload_bytes, kMaxPayloadBytes);
        ASSERT_EQ(f.on_wire_bytes, std::max(f.payload_bytes, kMinPayloadBytes) + 50);
      }
    }
  }
}

TEST(Fragmentation, VideoBurstExample) {
  const auto parts = fragment_payload(8336);
  ASSERT_EQ(parts.size(), 6u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(parts[static_cast<std::size_t>(i)], 1472);
  EXPECT_EQ(parts[5], 976);
}

TEST(Fragmentation, ConservesBytesAgainstBruteForce) {
  for (std::int64_t n = 18; n < 20'000; n += 7) {
    const auto parts = fragment_payload(n);
    std::vector<std::int64_t> expect;
    std::int64_t left = n;
    while (left > 0) {
      const std::int64_t take = left >= 1472 ? 1472 : left;
      expect.push_back(take);
      left -= take;
    }
    ASSERT_EQ(parts, expect) << n;
    ASSERT_EQ(std::accumulate(parts.begin(), parts.end(), std::int64_t{0}), n);
  }
}

TEST(CrossTraffic, TwoGigabitOverTwoLinks) {
  CrossTrafficSpec spec;
  spec.rate_bps = 2'000'000'000;
  spec.links = 2;
  EXPECT_EQ(spec.mean_gap_per_link_ns(), 12'336);
  Rng rng(6, "cross");
  const auto em = poisson_cross_traffic(spec, kNsPerSec, rng);
  double bits = 0;
  std::array<int, 2> per_link{};
  for (const auto& e : em) {
    bits += static_cast<double>(e.on_wire_bytes + kWireOverheadBytes) * 8.0;
    ++per_link[static_cast<std::size_t>(e.link)];
  }
  EXPECT_NEAR(bits / 2e9, 1.0, 0.02);
  EXPECT_NEAR(static_cast<double>(per_link[0]) / per_link[1], 1.0, 0.05);
}

TEST(CrossTraffic, ZeroRateIsEmpty) {
  CrossTrafficSpec spec;
  Rng rng(7, "cross");
  EXPECT_TRUE(poisson_cross_traffic(spec, kNsPerSec, rng).empty());
}

TEST(CrossTraffic, UniformSizeMean) {
  CrossTrafficSpec spec;
  spec.rate_bps = 1'000'000'000;
  spec.size_model = CrossTrafficSpec::SizeModel::UniformFrame;
  CrossTrafficGenerator gen(spec, 0, Rng(8, "cross/link0"));
  double sum = 0;
  for (int i = 0; i < 100'000; ++i) {
    const auto e = gen.next();
    ASSERT_GE(e.on_wire_bytes, 64);
    ASSERT_LE(e.on_wire_bytes, 1522);
    sum += static_cast<double>(e.on_wire_bytes);
  }
  EXPECT_NEAR(sum / 100'000 / 793.0, 1.0, 0.02);
}

TEST(CrossTraffic, GapsAreExponential) {
  CrossTrafficSpec spec;
  spec.rate_bps = 1'000'000'000;
  CrossTrafficGenerator gen(spec, 0, Rng(9, "cross/link0"));
  std::vector<double> gaps;
  std::int64_t prev = gen.next().emit_ns;
  for (int i = 0; i < 100'000; ++i) {
    const std::int64_t t = gen.next().emit_ns;
    gaps.push_back(static_cast<double>(t - prev));
    prev = t;
  }
  const double mean = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
  EXPECT_NEAR(mean / 12'336.0, 1.0, 0.02);
  // coefficient of variation of an exponential is 1
  EXPECT_NEAR(sample_stddev(gaps) / mean, 1.0, 0.03);
}

TEST(Trace, ReplaysRowsVerbatim) {
  const auto path = temp_file("two_rows.csv", "offset_ns,payload_bytes\n0,100\n1000,200\n");
  StreamSpec spec = load_trace(path);
  spec.pcp = 6;
  Rng rng(1, "trace");
  const auto sched = generate_schedule(spec, kNsPerSec, rng);
  ASSERT_EQ(sched.size(), 2u);
  EXPECT_EQ(sched[0].emit_ns, 0);
  EXPECT_EQ(sched[0].payload_bytes, 100);
  EXPECT_EQ(sched[1].emit_ns, 1000);
  EXPECT_EQ(sched[1].payload_bytes, 200);
}

TEST(Trace, EmptyFileWarns) {
  const auto path = temp_file("empty.csv", "");
  std::vector<std::string> warnings;
  StreamSpec spec = load_trace(path, &warnings);
  EXPECT_TRUE(spec.trace.empty());
  EXPECT_EQ(warnings.size(), 1u);
  Rng rng(1, "trace");
  EXPECT_TRUE(generate_schedule(spec, kNsPerSec, rng).empty());
}

TEST(Trace, OutOfOrderRejected) {
  const auto path = temp_file("unordered.csv", "0,100\n2000,100\n1000,100\n");
  EXPECT_THROW(load_trace(path), ParseError);
}

TEST(Trace, MalformedRowReportsLine) {
  const auto path = temp_file("bad.csv", "0,100\n10,abc\n");
  try {
    load_trace(path);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Trace, MissingFileIsIoError) { EXPECT_THROW(load_trace("/nonexistent/trace.csv"), IoError); }
