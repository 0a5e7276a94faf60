#include "tsnsim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "int128.hpp"
#include "tsnsim/error.hpp"

namespace tsnsim {

std::int64_t nearest_rank(const std::vector<std::int64_t>& sorted, std::int64_t num, std::int64_t den) {
  if (sorted.empty()) throw Error("percentile of an empty sample");
  const auto n = static_cast<detail::int128>(sorted.size());
  detail::int128 rank = (n * num + den - 1) / den;
  rank = std::clamp<detail::int128>(rank, 1, n);
  return sorted[static_cast<std::size_t>(rank - 1)];
}

SummaryStats summary_stats(std::vector<std::int64_t> latencies) {
  if (latencies.empty()) throw Error("summary statistics of an empty sample");
  std::sort(latencies.begin(), latencies.end());
  SummaryStats s;
  s.count = latencies.size();
  s.min = latencies.front();
  s.max = latencies.back();
  detail::int128 sum = 0;
  for (std::int64_t v : latencies) sum += v;
  const auto n = static_cast<detail::int128>(s.count);
  s.mean = static_cast<double>(sum) / static_cast<double>(s.count);
  // Exact sum of squared deviations scaled by N^2: sum (N*x - sum)^2.
  detail::int128 ss = 0;
  for (std::int64_t v : latencies) {
    const detail::int128 d = n * v - sum;
    ss += d * d;
  }
  const long double nn = static_cast<long double>(s.count);
  s.stddev = static_cast<double>(std::sqrt(static_cast<long double>(ss) / (nn * nn * nn)));
  s.median = nearest_rank(latencies, 1, 2);
  s.p99 = nearest_rank(latencies, 99, 100);
  s.p999 = nearest_rank(latencies, 999, 1000);
  s.p9999 = nearest_rank(latencies, 9999, 10000);
  return s;
}

std::vector<std::pair<std::int64_t, double>> ccdf(std::vector<std::int64_t> latencies) {
  if (latencies.empty()) throw Error("ccdf of an empty sample");
  std::sort(latencies.begin(), latencies.end());
  const double n = static_cast<double>(latencies.size());
  std::vector<std::pair<std::int64_t, double>> out;
  out.emplace_back(latencies.front() - 1, 1.0);
  for (std::size_t i = 0; i < latencies.size();) {
    std::size_t j = i;
    while (j < latencies.size() && latencies[j] == latencies[i]) ++j;
    out.emplace_back(latencies[i], static_cast<double>(latencies.size() - j) / n);
    i = j;
  }
  return out;
}

BoxStats box_stats(std::vector<std::int64_t> values, std::size_t max_outliers) {
  if (values.empty()) throw Error("box statistics of an empty sample");
  std::sort(values.begin(), values.end());
  BoxStats b;
  b.q1 = nearest_rank(values, 1, 4);
  b.median = nearest_rank(values, 1, 2);
  b.q3 = nearest_rank(values, 3, 4);
  const double iqr = static_cast<double>(b.q3 - b.q1);
  const double lo = static_cast<double>(b.q1) - 1.5 * iqr;
  const double hi = static_cast<double>(b.q3) + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (std::int64_t v : values) {
    const double x = static_cast<double>(v);
    if (x < lo || x > hi) {
      if (b.outliers.size() < max_outliers) b.outliers.push_back(v);
      continue;
    }
    b.whisker_low = std::min(b.whisker_low, v);
    b.whisker_high = std::max(b.whisker_high, v);
  }
  return b;
}

}  // namespace tsnsim
