#include <string>

#include "tsnsim/error.hpp"
#include "tsnsim/scenario.hpp"

namespace tsnsim {
namespace {

constexpr std::int64_t kCrossRate = 2'000'000'000;

ScenarioConfig base(std::string name, std::string set) {
  ScenarioConfig c;
  c.name = std::move(name);
  c.seed = 1;
  c.stream_set = std::move(set);
  c.duration_s = 10.0;
  c.output.dir = "results/" + c.name;
  return c;
}

std::string set_of(std::string_view prefix) {
  if (prefix == "generic") return "theta";
  if (prefix == "real") return "psi";
  if (prefix == "spot") return "omega";
  return {};
}

// "<set>-ct-gcl<c>-<u>[-gb]"
bool parse_gcl_id(std::string_view id, ScenarioConfig* out) {
  const auto dash = id.find("-ct-gcl");
  if (dash == std::string_view::npos) return false;
  const std::string set = set_of(id.substr(0, dash));
  if (set.empty()) return false;
  std::string_view rest = id.substr(dash + 7);
  bool gb = false;
  if (rest.size() > 3 && rest.substr(rest.size() - 3) == "-gb") {
    gb = true;
    rest.remove_suffix(3);
  }
  if (rest.size() != 3 || rest[1] != '-') return false;
  const int config = rest[0] - '0';
  const int units = rest[2] - '0';
  if (config < 1 || config > 4 || (units != 1 && units != 3)) return false;
  if (gb && (config == 2 || config == 3)) return false;
  ScenarioConfig c = base(std::string(id), set);
  c.cross.rate_bps = kCrossRate;
  c.selection = SelectionPolicy::Tas;
  c.gcl.config = config;
  c.gcl.slot_units = units;
  c.gcl.guard_band = gb;
  *out = c;
  return true;
}

}  // namespace

std::vector<std::string> bundled_scenario_ids() {
  std::vector<std::string> ids{"baseline-generic", "baseline-real", "baseline-spot", "generic", "generic-ct",
                               "generic-spq", "generic-ct-spq", "real-ct", "real-ct-spq", "spot-ct", "spot-ct-spq"};
  for (const char* set : {"generic", "real", "spot"}) {
    for (int config = 1; config <= 4; ++config) {
      for (int units : {1, 3}) {
        const std::string id = std::string(set) + "-ct-gcl" + std::to_string(config) + "-" + std::to_string(units);
        ids.push_back(id);
        if (config == 1 || config == 4) ids.push_back(id + "-gb");
      }
    }
  }
  ids.insert(ids.end(), {"txinject", "ptp-sweep", "cut-through"});
  return ids;
}

ScenarioConfig bundled_scenario(std::string_view id) {
  for (const char* prefix : {"generic", "real", "spot"}) {
    const std::string p(prefix);
    if (id == "baseline-" + p) {
      ScenarioConfig c = base(std::string(id), set_of(p));
      c.isolate_streams = true;
      c.selection = SelectionPolicy::None;
      return c;
    }
    if (id == p + "-ct" || id == p + "-ct-spq") {
      ScenarioConfig c = base(std::string(id), set_of(p));
      c.cross.rate_bps = kCrossRate;
      c.selection = id == p + "-ct" ? SelectionPolicy::None : SelectionPolicy::Spq;
      return c;
    }
  }
  if (id == "generic" || id == "generic-spq") {
    ScenarioConfig c = base(std::string(id), "theta");
    c.selection = id == "generic" ? SelectionPolicy::None : SelectionPolicy::Spq;
    return c;
  }
  ScenarioConfig c;
  if (parse_gcl_id(id, &c)) return c;
  if (id == "txinject") {
    c = base("txinject", "theta");
    c.cross.rate_bps = kCrossRate;
    c.selection = SelectionPolicy::Tas;
    c.gcl.config = 1;
    c.gcl.slot_units = 10;
    c.gcl.guard_band = true;
    c.sender_tas.enabled = true;
    c.jitter = "sender-tas";
    return c;
  }
  if (id == "ptp-sweep") {
    // One rate per run; `reproduce ptp-sweep` varies ptp.sync_rate_per_s.
    c = base("ptp-sweep", "theta");
    c.active_streams = std::vector<std::string>{};
    c.duration_s = 30.0;
    c.ptp.slave_drift_ppb = {50'000};
    c.ptp.deviation_threshold_ns = 1'000'000;
    return c;
  }
  if (id == "cut-through") {
    c = base("cut-through", "custom");
    StreamSpec s;
    s.name = "size-sweep";
    s.pcp = 6;
    s.cycle_ns = 50'000;
    s.payload = PayloadModel::sweep(64, kMaxFrameBytes, 1);
    s.raw_frame_sizes = true;
    c.custom_streams = {s};
    c.selection = SelectionPolicy::None;
    c.random_start = false;
    c.ptp.enabled = false;
    c.link_utilization_wait_s = 0.0;
    c.duration_s = 0.073;  // one pass over 1459 sizes
    return c;
  }
  throw ConfigError("unknown figure id '" + std::string(id) + "'");
}

}  // namespace tsnsim
