#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tsnsim {

struct SummaryStats {
  std::size_t count = 0;
  std::int64_t min = 0;
  double mean = 0.0;
  std::int64_t median = 0;
  /// Population standard deviation.
  double stddev = 0.0;
  std::int64_t p99 = 0;
  std::int64_t p999 = 0;
  std::int64_t p9999 = 0;
  std::int64_t max = 0;

  bool operator==(const SummaryStats&) const = default;
};

/// Nearest-rank percentile num/den of a sorted sample: the value at rank
/// ceil(N * num / den), ranks starting at 1. Pre: non-empty, 0 < num <= den.
std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, std::int64_t num, std::int64_t den);

/// Throws Error on empty input.
SummaryStats summary_stats(std::vector<std::int64_t> latencies);

/// Points (x, P(L > x)) for every distinct x, preceded by (min - 1, 1.0).
std::vector<std::pair<std::int64_t, double>> ccdf(std::vector<std::int64_t> latencies);

struct BoxStats {
  std::int64_t q1 = 0;
  std::int64_t median = 0;
  std::int64_t q3 = 0;
  /// Most extreme samples within 1.5 IQR of the box.
  std::int64_t whisker_low = 0;
  std::int64_t whisker_high = 0;
  std::vector<std::int64_t> outliers;
};

BoxStats box_stats(std::vector<std::int64_t> values, std::size_t max_outliers = 200);

}  // namespace tsnsim
