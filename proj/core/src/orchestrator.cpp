#include "tsnsim/orchestrator.hpp"

#include <algorithm>

#include "tsnsim/error.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/testbed.hpp"

namespace tsnsim {

std::vector<std::int64_t> StreamResult::latencies() const {
  std::vector<std::int64_t> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.latency_ns);
  return out;
}

void RunResult::finalize() {
  for (auto& s : streams) {
    s.stats.reset();
    if (!s.records.empty()) s.stats = summary_stats(s.latencies());
  }
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
  return attempt == 0 ? seed : Rng::derive_seed(seed, static_cast<std::uint64_t>(attempt));
}

RunResult run_single(const ScenarioConfig& cfg, std::uint64_t seed) {
  const std::vector<StreamSpec> streams = resolve_streams(cfg);
  if (!cfg.isolate_streams || streams.size() <= 1) {
    return run_attempt(cfg, streams, !cfg.isolate_streams, seed);
  }
  RunResult merged;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    RunResult part = run_attempt(cfg, {streams[i]}, false, seed);
    for (auto& s : part.streams) {
      for (auto& r : s.records) r.stream = static_cast<int>(merged.streams.size());
      merged.streams.push_back(std::move(s));
    }
    for (auto d : part.ptp.deviations) {
      d.slave_id += static_cast<int>(i) * 100;
      merged.ptp.deviations.push_back(d);
    }
    merged.ptp.enabled = part.ptp.enabled;
    merged.ptp.sync_rate_per_s = part.ptp.sync_rate_per_s;
    merged.ptp.max_abs_deviation_ns = std::max(merged.ptp.max_abs_deviation_ns, part.ptp.max_abs_deviation_ns);
    merged.ptp.timeouts += part.ptp.timeouts;
    merged.ptp.anomalies += part.ptp.anomalies;
    merged.ptp.slave_drift_ppb.insert(merged.ptp.slave_drift_ppb.end(), part.ptp.slave_drift_ppb.begin(),
                                      part.ptp.slave_drift_ppb.end());
    merged.counters.frames_in += part.counters.frames_in;
    merged.counters.forwarded += part.counters.forwarded;
    merged.counters.dropped += part.counters.dropped;
    merged.counters.awaiting_eligibility += part.counters.awaiting_eligibility;
    merged.counters.queued += part.counters.queued;
    merged.counters.terminated_locally += part.counters.terminated_locally;
    merged.events += part.events;
    merged.port_log.insert(merged.port_log.end(), part.port_log.begin(), part.port_log.end());
    merged.measurement_start_ns = part.measurement_start_ns;
    merged.measurement_end_ns = std::max(merged.measurement_end_ns, part.measurement_end_ns);
  }
  merged.scenario = cfg.name;
  merged.seed = seed;
  merged.attempt_seed = seed;
  merged.finalize();
  return merged;
}

RunResult run_scenario(const ScenarioConfig& cfg, const LogFn& log) {
  cfg.validate();
  const std::uint64_t seed = *cfg.seed;
  const int attempts = cfg.ptp.enabled ? std::min(cfg.ptp.max_attempts, kMaxAttempts) : 1;
  for (int a = 0; a < attempts; ++a) {
    const std::uint64_t s = attempt_seed(seed, a);
    RunResult r = run_single(cfg, s);
    r.seed = seed;
    r.attempt_seed = s;
    r.retry_count = a;
    if (!cfg.ptp.enabled || r.ptp.max_abs_deviation_ns <= cfg.ptp.deviation_threshold_ns) return r;
    if (log) {
      log("attempt " + std::to_string(a + 1) + ": max PTP deviation " + std::to_string(r.ptp.max_abs_deviation_ns) +
          " ns exceeds " + std::to_string(cfg.ptp.deviation_threshold_ns) + " ns, retrying");
    }
  }
  throw ScenarioError("scenario '" + cfg.name + "': PTP deviation above threshold in all " + std::to_string(attempts) +
                      " attempts");
}

SweepAxis parse_vary(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 >= text.size()) {
    throw ConfigError("--vary expects key=v1,v2,...");
  }
  SweepAxis axis;
  axis.key = std::string(text.substr(0, eq));
  std::string_view rest = text.substr(eq + 1);
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view v = rest.substr(0, comma);
    if (v.empty()) throw ConfigError("empty value in --vary " + axis.key);
    axis.values.emplace_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return axis;
}

std::vector<SweepPoint> expand_sweep(std::string_view json_text, const std::vector<SweepAxis>& axes,
                                     const std::filesystem::path& base_dir) {
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> next;
    for (const auto& c : combos) {
      for (const auto& v : axis.values) {
        auto e = c;
        e.emplace_back(axis.key, v);
        next.push_back(std::move(e));
      }
    }
    combos = std::move(next);
  }
  std::vector<SweepPoint> out;
  for (const auto& kv : combos) {
    SweepPoint p;
    for (const auto& [k, v] : kv) p.label += (p.label.empty() ? "" : "_") + k + "=" + v;
    p.config = parse_scenario(apply_overrides(json_text, kv), base_dir);
    if (!p.label.empty()) p.config.name += "_" + p.label;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace tsnsim
