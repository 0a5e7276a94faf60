#include "oracle.hpp"

#include <algorithm>
#include <cstddef>

namespace oracle {
namespace {

// At 1 Gb/s a byte takes 8 ns; preamble, SFD and IFG add 20 bytes per frame.
std::int64_t wire_ns(std::int64_t bytes) { return (bytes + 20) * 8; }

struct GateTable {
  std::int64_t cycle = 0;
  // open[q][phase], and how many ns the gate stays open from that phase on
  std::vector<std::vector<char>> open;
  std::vector<std::vector<std::int64_t>> run;
};

GateTable tabulate(const std::vector<Gate>& gcl) {
  GateTable g;
  for (const auto& e : gcl) g.cycle += e.duration_ns;
  g.open.assign(8, std::vector<char>(static_cast<std::size_t>(g.cycle), 0));
  g.run.assign(8, std::vector<std::int64_t>(static_cast<std::size_t>(g.cycle), 0));
  std::int64_t phase = 0;
  for (const auto& e : gcl) {
    for (std::int64_t k = 0; k < e.duration_ns; ++k, ++phase) {
      for (int q = 0; q < 8; ++q) g.open[q][static_cast<std::size_t>(phase)] = (e.mask >> q) & 1;
    }
  }
  for (int q = 0; q < 8; ++q) {
    auto& o = g.open[q];
    auto& r = g.run[q];
    const bool always = std::all_of(o.begin(), o.end(), [](char c) { return c != 0; });
    if (always) {
      std::fill(r.begin(), r.end(), INT64_MAX / 4);
      continue;
    }
    // two backward passes so that runs wrapping the cycle end are counted
    std::int64_t acc = 0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::int64_t p = g.cycle - 1; p >= 0; --p) {
        acc = o[static_cast<std::size_t>(p)] ? acc + 1 : 0;
        r[static_cast<std::size_t>(p)] = acc;
      }
    }
  }
  return g;
}

}  // namespace

std::vector<std::int64_t> departures(const Instance& in, std::int64_t horizon_ns) {
  const std::size_t n = in.frames.size();
  std::vector<std::int64_t> eligible(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = in.frames[i];
    eligible[i] = f.first_bit_ns + 8 * std::min(f.bytes, in.threshold_bytes) + in.processing_ns;
  }
  GateTable gates;
  if (in.policy == Policy::Tas) gates = tabulate(in.gcl);

  std::vector<std::int64_t> start(n, -1);
  std::size_t left = n;
  std::int64_t link_free = 0;
  for (std::int64_t t = 0; t <= horizon_ns && left > 0; ++t) {
    if (t < link_free) {
      t = link_free - 1;
      continue;
    }
    auto earlier = [&](std::size_t a, std::size_t b) {
      if (eligible[a] != eligible[b]) return eligible[a] < eligible[b];
      if (in.frames[a].first_bit_ns != in.frames[b].first_bit_ns) return in.frames[a].first_bit_ns < in.frames[b].first_bit_ns;
      return a < b;
    };
    // head of line per queue; only heads are ever considered
    std::size_t head[8];
    std::fill(head, head + 8, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (start[i] >= 0 || eligible[i] > t) continue;
      std::size_t& h = head[in.frames[i].pcp];
      if (h == n || earlier(i, h)) h = i;
    }
    std::size_t best = n;
    for (int q = 7; q >= 0; --q) {
      const std::size_t i = head[q];
      if (i == n) continue;
      if (in.policy == Policy::Tas) {
        const auto phase = static_cast<std::size_t>(t % gates.cycle);
        if (!gates.open[q][phase]) continue;
        if (in.length_check && gates.run[q][phase] < wire_ns(in.frames[i].bytes)) continue;
      }
      if (in.policy != Policy::None) {
        best = i;
        break;
      }
      if (best == n || earlier(i, best)) best = i;
    }
    if (best == n) continue;
    start[best] = t;
    link_free = t + wire_ns(in.frames[best].bytes);
    --left;
  }
  return start;
}

}  // namespace oracle
