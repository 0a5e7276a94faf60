#include "tsnsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tsnsim/error.hpp"

namespace tsnsim {
namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      // Accept 2e9 style numbers for integer fields as long as they are whole.
      if (it->is_number_float()) {
        const double d = it->template get<double>();
        if (d != static_cast<double>(static_cast<T>(d))) throw ConfigError(std::string(key) + " must be an integer");
        return static_cast<T>(d);
      }
    }
    return it->template get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for '") + key + "'");
  }
}

std::string size_model_name(CrossTrafficSpec::SizeModel m) {
  return m == CrossTrafficSpec::SizeModel::FixedMax ? "fixed" : "uniform";
}

JitterProfile jitter_from(const json& j) {
  if (j.is_string()) return JitterProfile::preset(j.get<std::string>());
  check_keys(j, {"kind", "stddev_ns", "outlier_prob", "outlier_magnitude_ns"}, "jitter");
  JitterProfile p;
  const std::string kind = get_or<std::string>(j, "kind", "gaussian");
  if (kind == "ideal") {
    p.kind = JitterProfile::Kind::Ideal;
  } else if (kind == "gaussian") {
    p.kind = JitterProfile::Kind::Gaussian;
  } else if (kind == "gaussian-with-outliers") {
    p.kind = JitterProfile::Kind::GaussianWithOutliers;
  } else {
    throw ConfigError("unknown jitter kind '" + kind + "'");
  }
  p.stddev_ns = get_or<std::int64_t>(j, "stddev_ns", 0);
  p.outlier_prob = get_or<double>(j, "outlier_prob", 0.0);
  p.outlier_magnitude_ns = get_or<std::int64_t>(j, "outlier_magnitude_ns", 0);
  if (p.stddev_ns < 0 || p.outlier_prob < 0.0 || p.outlier_prob > 1.0) throw ConfigError("invalid jitter parameters");
  return p;
}

json jitter_to(const JitterProfile& p) {
  const char* kind = p.kind == JitterProfile::Kind::Ideal      ? "ideal"
                     : p.kind == JitterProfile::Kind::Gaussian ? "gaussian"
                                                               : "gaussian-with-outliers";
  return json{{"kind", kind},
              {"stddev_ns", p.stddev_ns},
              {"outlier_prob", p.outlier_prob},
              {"outlier_magnitude_ns", p.outlier_magnitude_ns}};
}

PayloadModel payload_from(const json& j) {
  if (j.is_number()) return PayloadModel::fixed(j.get<std::int64_t>());
  check_keys(j, {"model", "bytes", "mean", "stddev", "min", "max", "step"}, "payload");
  const std::string model = get_or<std::string>(j, "model", "fixed");
  PayloadModel p;
  if (model == "fixed") {
    p = PayloadModel::fixed(get_or<std::int64_t>(j, "bytes", get_or<std::int64_t>(j, "mean", 1472)));
  } else if (model == "lognormal") {
    p = PayloadModel::lognormal(get_or<double>(j, "mean", 0.0), get_or<double>(j, "stddev", 0.0));
    p.min_bytes = get_or<std::int64_t>(j, "min", p.min_bytes);
    p.max_bytes = get_or<std::int64_t>(j, "max", p.max_bytes);
  } else if (model == "uniform") {
    p = PayloadModel::uniform(get_or<std::int64_t>(j, "min", 18), get_or<std::int64_t>(j, "max", 1472));
  } else if (model == "sweep") {
    p = PayloadModel::sweep(get_or<std::int64_t>(j, "min", 64), get_or<std::int64_t>(j, "max", 1522),
                            get_or<std::int64_t>(j, "step", 1));
  } else {
    throw ConfigError("unknown payload model '" + model + "'");
  }
  if (p.min_bytes > p.max_bytes || p.step <= 0) throw ConfigError("invalid payload bounds");
  return p;
}

json payload_to(const PayloadModel& p) {
  switch (p.kind) {
    case PayloadModel::Kind::Fixed: return json{{"model", "fixed"}, {"bytes", std::llround(p.mean)}};
    case PayloadModel::Kind::LogNormal:
      return json{{"model", "lognormal"}, {"mean", p.mean}, {"stddev", p.stddev}, {"min", p.min_bytes}, {"max", p.max_bytes}};
    case PayloadModel::Kind::Uniform: return json{{"model", "uniform"}, {"min", p.min_bytes}, {"max", p.max_bytes}};
    case PayloadModel::Kind::Sweep:
      return json{{"model", "sweep"}, {"min", p.min_bytes}, {"max", p.max_bytes}, {"step", p.step}};
  }
  return {};
}

StreamSpec stream_from(const json& j, const JitterProfile& default_jitter, const std::filesystem::path& base_dir) {
  check_keys(j,
             {"name", "pcp", "cycle_ns", "acyclic", "bitrate_bps", "payload", "payload_bytes", "raw_frame_sizes",
              "jitter", "start_offset_ns", "trace"},
             "stream");
  StreamSpec s;
  if (j.contains("trace")) {
    std::filesystem::path p = get_or<std::string>(j, "trace", "");
    if (p.is_relative()) p = base_dir / p;
    s = load_trace(p);
    s.trace_path = p.string();
  }
  s.name = get_or<std::string>(j, "name", s.name);
  if (s.name.empty()) throw ConfigError("stream needs a name");
  s.pcp = get_or<int>(j, "pcp", 0);
  s.periodicity = get_or<bool>(j, "acyclic", false) ? Periodicity::Acyclic : Periodicity::Cyclic;
  s.cycle_ns = get_or<std::int64_t>(j, "cycle_ns", 0);
  s.bitrate_bps = get_or<std::int64_t>(j, "bitrate_bps", 0);
  if (j.contains("payload")) {
    s.payload = payload_from(j.at("payload"));
  } else {
    s.payload = PayloadModel::fixed(get_or<std::int64_t>(j, "payload_bytes", 1472));
  }
  s.raw_frame_sizes = get_or<bool>(j, "raw_frame_sizes", false);
  s.jitter = j.contains("jitter") ? jitter_from(j.at("jitter")) : default_jitter;
  s.start_offset_ns = get_or<std::int64_t>(j, "start_offset_ns", 0);
  if (s.replays_trace()) s.periodicity = Periodicity::Acyclic;
  s.validate();
  return s;
}

json stream_to(const StreamSpec& s) {
  json j{{"name", s.name},
         {"pcp", s.pcp},
         {"payload", payload_to(s.payload)},
         {"raw_frame_sizes", s.raw_frame_sizes},
         {"jitter", jitter_to(s.jitter)},
         {"start_offset_ns", s.start_offset_ns}};
  if (!s.trace_path.empty()) {
    j["trace"] = s.trace_path;
  } else if (s.periodicity == Periodicity::Cyclic) {
    j["cycle_ns"] = s.cycle_ns;
  } else {
    j["acyclic"] = true;
    j["bitrate_bps"] = s.bitrate_bps;
  }
  return j;
}

std::uint64_t seed_from(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ConfigError("seed must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  if (v.is_string()) {
    try {
      std::size_t used = 0;
      const std::string text = v.get<std::string>();
      const std::uint64_t s = std::stoull(text, &used, 0);
      if (used == text.size()) return s;
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("seed must be a non-negative integer");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // byte offset -> line number for the message
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseError(std::string("invalid scenario JSON: ") + e.what(), line);
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!seed) throw ConfigError("scenario '" + name + "' has no seed; seeds are required for reproducibility");
  if (!(duration_s > 0.0)) throw ConfigError("duration_s must be positive");
  if (drain_s < 0.0 || link_utilization_wait_s < 0.0) throw ConfigError("drain_s and link_utilization_wait_s must be >= 0");
  if (ptp.enabled) {
    if (ptp.sync_rate_per_s <= 0) throw ConfigError("ptp.sync_rate_per_s must be positive");
    if (ptp.warmup_s < 0.0) throw ConfigError("ptp.warmup_s must be >= 0");
    if (ptp.max_attempts < 1 || ptp.max_attempts > 10) throw ConfigError("ptp.max_attempts must be in 1..10");
    if (ptp.deviation_threshold_ns < 0) throw ConfigError("ptp.deviation_threshold_ns must be >= 0");
    if (ptp.servo.lock_baseline_ns < 0) throw ConfigError("ptp.servo.lock_baseline_ns must be >= 0");
    if (ptp.max_drift_ppb < 0 || ptp.max_drift_ppb > 100'000'000) throw ConfigError("ptp.max_drift_ppb out of range");
  }
  if (cross.rate_bps < 0 || cross.links < 1) throw ConfigError("cross_traffic needs rate_bps >= 0 and links >= 1");
  if (sw.link_rate_bps <= 0 || sw.shared_buffer_bytes <= 0 || sw.cut_through_threshold_bytes <= 0 ||
      sw.processing_delay_ns < 0) {
    throw ConfigError("invalid switch settings");
  }
  if (sender_tas.enabled && selection != SelectionPolicy::Tas) {
    throw ConfigError("sender_tas needs selection \"tas\" on the switch");
  }
  if (sender_tas.dilation < 1 || sender_tas.advance_ns < 0 || sender_tas.hold_cap == 0) {
    throw ConfigError("invalid sender_tas settings");
  }
  if (selection == SelectionPolicy::Tas) (void)build_gcl(*this);
  const auto streams = resolve_streams(*this);
  if (streams.size() > 8) throw ConfigError("at most 8 streams are supported");
  std::set<std::string> names;
  for (const auto& s : streams) {
    if (!names.insert(s.name).second) throw ConfigError("duplicate stream name " + s.name);
  }
  for (const auto& f : output.formats) {
    if (f != "csv" && f != "json" && f != "svg") throw ConfigError("unknown output format '" + f + "'");
  }
}

ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json root = parse_json(json_text);
  check_keys(root,
             {"name", "seed", "duration_s", "drain_s", "stream_set", "streams", "active_streams", "isolate_streams",
              "jitter", "random_start", "cross_traffic", "selection", "gcl", "switch", "sender_tas", "ptp",
              "link_utilization_wait_s", "record_port_log", "output"},
             "scenario");
  ScenarioConfig c;
  try {
    c.name = get_or<std::string>(root, "name", c.name);
    if (root.contains("seed") && !root.at("seed").is_null()) c.seed = seed_from(root.at("seed"));
    c.duration_s = get_or<double>(root, "duration_s", c.duration_s);
    c.drain_s = get_or<double>(root, "drain_s", c.drain_s);
    c.stream_set = get_or<std::string>(root, "stream_set", c.stream_set);
    c.isolate_streams = get_or<bool>(root, "isolate_streams", c.isolate_streams);
    c.jitter = get_or<std::string>(root, "jitter", c.jitter);
    (void)JitterProfile::preset(c.jitter);
    c.random_start = get_or<bool>(root, "random_start", c.random_start);
    c.link_utilization_wait_s = get_or<double>(root, "link_utilization_wait_s", c.link_utilization_wait_s);
    c.record_port_log = get_or<bool>(root, "record_port_log", c.record_port_log);
    if (root.contains("selection")) c.selection = parse_selection(get_or<std::string>(root, "selection", "spq"));

    if (root.contains("active_streams") && !root.at("active_streams").is_null()) {
      c.active_streams = root.at("active_streams").get<std::vector<std::string>>();
    }
    if (root.contains("streams")) {
      if (!root.at("streams").is_array()) throw ConfigError("streams must be an array");
      for (const json& s : root.at("streams")) {
        c.custom_streams.push_back(stream_from(s, JitterProfile::preset(c.jitter), base_dir));
      }
      if (!root.contains("stream_set")) c.stream_set = "custom";
    }
    if (root.contains("cross_traffic") && !root.at("cross_traffic").is_null()) {
      const json& j = root.at("cross_traffic");
      check_keys(j, {"rate_bps", "size_model", "links", "nic_queue_frames"}, "cross_traffic");
      c.cross.rate_bps = get_or<std::int64_t>(j, "rate_bps", 0);
      const std::string model = get_or<std::string>(j, "size_model", "fixed");
      if (model == "fixed") {
        c.cross.size_model = CrossTrafficSpec::SizeModel::FixedMax;
      } else if (model == "uniform") {
        c.cross.size_model = CrossTrafficSpec::SizeModel::UniformFrame;
      } else {
        throw ConfigError("cross_traffic.size_model must be fixed or uniform");
      }
      c.cross.links = get_or<int>(j, "links", c.cross.links);
      c.cross.nic_queue_frames = get_or<std::size_t>(j, "nic_queue_frames", c.cross.nic_queue_frames);
    }
    if (root.contains("gcl")) {
      const json& j = root.at("gcl");
      check_keys(j, {"template", "slot_unit_ns", "slot_units", "guard_band", "length_check", "entries", "base_ns"}, "gcl");
      c.gcl.config = get_or<int>(j, "template", c.gcl.config);
      c.gcl.slot_unit_ns = get_or<std::int64_t>(j, "slot_unit_ns", c.gcl.slot_unit_ns);
      c.gcl.slot_units = get_or<int>(j, "slot_units", c.gcl.slot_units);
      c.gcl.guard_band = get_or<bool>(j, "guard_band", c.gcl.guard_band);
      c.gcl.length_check = get_or<bool>(j, "length_check", c.gcl.length_check);
      c.gcl.base_ns = get_or<std::int64_t>(j, "base_ns", c.gcl.base_ns);
      if (j.contains("entries") && !j.at("entries").is_null()) {
        for (const json& e : j.at("entries")) {
          check_keys(e, {"mask", "duration_ns"}, "gcl entry");
          c.gcl.entries.push_back({parse_gate_mask(get_or<std::string>(e, "mask", "")),
                                   get_or<std::int64_t>(e, "duration_ns", 0)});
        }
        if (!j.contains("template")) c.gcl.config = 0;
      }
    }
    if (root.contains("switch")) {
      const json& j = root.at("switch");
      check_keys(j, {"link_rate_bps", "processing_delay_ns", "shared_buffer_bytes", "buffer_alpha", "cut_through_threshold_bytes"},
                 "switch");
      c.sw.link_rate_bps = get_or<std::int64_t>(j, "link_rate_bps", c.sw.link_rate_bps);
      c.sw.processing_delay_ns = get_or<std::int64_t>(j, "processing_delay_ns", c.sw.processing_delay_ns);
      c.sw.shared_buffer_bytes = get_or<std::int64_t>(j, "shared_buffer_bytes", c.sw.shared_buffer_bytes);
      c.sw.cut_through_threshold_bytes = get_or<std::int64_t>(j, "cut_through_threshold_bytes", c.sw.cut_through_threshold_bytes);
      c.sw.buffer_alpha = get_or<double>(j, "buffer_alpha", c.sw.buffer_alpha);
    }
    if (root.contains("sender_tas")) {
      const json& j = root.at("sender_tas");
      check_keys(j, {"enabled", "advance_ns", "dilation", "hold_cap"}, "sender_tas");
      c.sender_tas.enabled = get_or<bool>(j, "enabled", c.sender_tas.enabled);
      c.sender_tas.advance_ns = get_or<std::int64_t>(j, "advance_ns", c.sender_tas.advance_ns);
      c.sender_tas.dilation = get_or<int>(j, "dilation", c.sender_tas.dilation);
      c.sender_tas.hold_cap = get_or<std::size_t>(j, "hold_cap", c.sender_tas.hold_cap);
    }
    if (root.contains("ptp")) {
      const json& j = root.at("ptp");
      check_keys(j,
                 {"enabled", "sync_rate_per_s", "warmup_s", "deviation_threshold_ns", "slave_drift_ppb",
                  "max_drift_ppb", "max_initial_offset_ns", "quantize_8ns", "max_attempts", "turnaround_ns", "servo"},
                 "ptp");
      c.ptp.enabled = get_or<bool>(j, "enabled", c.ptp.enabled);
      c.ptp.sync_rate_per_s = get_or<int>(j, "sync_rate_per_s", c.ptp.sync_rate_per_s);
      c.ptp.warmup_s = get_or<double>(j, "warmup_s", c.ptp.warmup_s);
      c.ptp.deviation_threshold_ns = get_or<std::int64_t>(j, "deviation_threshold_ns", c.ptp.deviation_threshold_ns);
      if (j.contains("slave_drift_ppb") && !j.at("slave_drift_ppb").is_null()) {
        const json& d = j.at("slave_drift_ppb");
        if (d.is_array()) {
          c.ptp.slave_drift_ppb = d.get<std::vector<std::int64_t>>();
        } else {
          c.ptp.slave_drift_ppb = {get_or<std::int64_t>(j, "slave_drift_ppb", 0)};
        }
      }
      c.ptp.max_drift_ppb = get_or<std::int64_t>(j, "max_drift_ppb", c.ptp.max_drift_ppb);
      c.ptp.max_initial_offset_ns = get_or<std::int64_t>(j, "max_initial_offset_ns", c.ptp.max_initial_offset_ns);
      c.ptp.quantize_8ns = get_or<bool>(j, "quantize_8ns", c.ptp.quantize_8ns);
      c.ptp.max_attempts = get_or<int>(j, "max_attempts", c.ptp.max_attempts);
      c.ptp.turnaround_ns = get_or<std::int64_t>(j, "turnaround_ns", c.ptp.turnaround_ns);
      if (j.contains("servo")) {
        const json& s = j.at("servo");
        check_keys(s, {"kp_scale", "kp_exponent", "norm_max", "ki", "max_freq_adj_ppb", "lock_step_threshold_ns", "lock_baseline_ns"}, "ptp.servo");
        PiServoConfig& sv = c.ptp.servo;
        sv.kp_scale = get_or<double>(s, "kp_scale", sv.kp_scale);
        sv.kp_exponent = get_or<double>(s, "kp_exponent", sv.kp_exponent);
        sv.norm_max = get_or<double>(s, "norm_max", sv.norm_max);
        sv.ki = get_or<double>(s, "ki", sv.ki);
        sv.max_freq_adj_ppb = get_or<std::int64_t>(s, "max_freq_adj_ppb", sv.max_freq_adj_ppb);
        sv.lock_step_threshold_ns = get_or<std::int64_t>(s, "lock_step_threshold_ns", sv.lock_step_threshold_ns);
        sv.lock_baseline_ns = get_or<std::int64_t>(s, "lock_baseline_ns", sv.lock_baseline_ns);
      }
    }
    if (root.contains("output")) {
      const json& j = root.at("output");
      check_keys(j, {"dir", "formats"}, "output");
      c.output.dir = get_or<std::string>(j, "dir", c.output.dir);
      if (j.contains("formats")) c.output.formats = j.at("formats").get<std::vector<std::string>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.parent_path());
}

std::string dump_scenario(const ScenarioConfig& c) {
  json root;
  root["name"] = c.name;
  root["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  root["duration_s"] = c.duration_s;
  root["drain_s"] = c.drain_s;
  root["stream_set"] = c.stream_set;
  if (!c.custom_streams.empty()) {
    json arr = json::array();
    for (const auto& s : c.custom_streams) arr.push_back(stream_to(s));
    root["streams"] = arr;
  }
  root["active_streams"] = c.active_streams ? json(*c.active_streams) : json(nullptr);
  root["isolate_streams"] = c.isolate_streams;
  root["jitter"] = c.jitter;
  root["random_start"] = c.random_start;
  root["cross_traffic"] = json{{"rate_bps", c.cross.rate_bps},
                               {"size_model", size_model_name(c.cross.size_model)},
                               {"links", c.cross.links},
                               {"nic_queue_frames", c.cross.nic_queue_frames}};
  root["selection"] = std::string(to_string(c.selection));
  json gcl{{"template", c.gcl.config},
           {"slot_unit_ns", c.gcl.slot_unit_ns},
           {"slot_units", c.gcl.slot_units},
           {"guard_band", c.gcl.guard_band},
           {"length_check", c.gcl.length_check},
           {"base_ns", c.gcl.base_ns}};
  if (!c.gcl.entries.empty()) {
    json arr = json::array();
    for (const auto& e : c.gcl.entries) arr.push_back(json{{"mask", format_gate_mask(e.gate_mask)}, {"duration_ns", e.duration_ns}});
    gcl["entries"] = arr;
  }
  root["gcl"] = gcl;
  root["switch"] = json{{"link_rate_bps", c.sw.link_rate_bps},
                        {"processing_delay_ns", c.sw.processing_delay_ns},
                        {"shared_buffer_bytes", c.sw.shared_buffer_bytes},
                        {"buffer_alpha", c.sw.buffer_alpha},
                        {"cut_through_threshold_bytes", c.sw.cut_through_threshold_bytes}};
  root["sender_tas"] = json{{"enabled", c.sender_tas.enabled},
                            {"advance_ns", c.sender_tas.advance_ns},
                            {"dilation", c.sender_tas.dilation},
                            {"hold_cap", c.sender_tas.hold_cap}};
  const PiServoConfig& sv = c.ptp.servo;
  root["ptp"] = json{{"enabled", c.ptp.enabled},
                     {"sync_rate_per_s", c.ptp.sync_rate_per_s},
                     {"warmup_s", c.ptp.warmup_s},
                     {"deviation_threshold_ns", c.ptp.deviation_threshold_ns},
                     {"slave_drift_ppb", c.ptp.slave_drift_ppb.empty() ? json(nullptr) : json(c.ptp.slave_drift_ppb)},
                     {"max_drift_ppb", c.ptp.max_drift_ppb},
                     {"max_initial_offset_ns", c.ptp.max_initial_offset_ns},
                     {"quantize_8ns", c.ptp.quantize_8ns},
                     {"max_attempts", c.ptp.max_attempts},
                     {"turnaround_ns", c.ptp.turnaround_ns},
                     {"servo", json{{"kp_scale", sv.kp_scale},
                                    {"kp_exponent", sv.kp_exponent},
                                    {"norm_max", sv.norm_max},
                                    {"ki", sv.ki},
                                    {"max_freq_adj_ppb", sv.max_freq_adj_ppb},
                                    {"lock_step_threshold_ns", sv.lock_step_threshold_ns},
                                    {"lock_baseline_ns", sv.lock_baseline_ns}}}};
  root["link_utilization_wait_s"] = c.link_utilization_wait_s;
  root["record_port_log"] = c.record_port_log;
  root["output"] = json{{"dir", c.output.dir}, {"formats", c.output.formats}};
  return root.dump(2) + "\n";
}

std::string apply_overrides(std::string_view json_text, const std::vector<std::pair<std::string, std::string>>& kv) {
  json root = parse_json(json_text);
  for (const auto& [key, value] : kv) {
    json* node = &root;
    std::stringstream path(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    if (parts.empty()) throw ConfigError("empty override key");
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      if (!node->is_object()) throw ConfigError("override path '" + key + "' crosses a non-object");
      node = &(*node)[parts[i]];
      if (node->is_null()) *node = json::object();
    }
    if (!node->is_object()) throw ConfigError("override path '" + key + "' crosses a non-object");
    json v = json::parse(value, nullptr, false);
    if (v.is_discarded()) v = value;
    (*node)[parts.back()] = v;
  }
  return root.dump(2) + "\n";
}

Gcl build_gcl(const ScenarioConfig& c) {
  if (c.gcl.config == 0) return Gcl(c.gcl.entries, SimTime{c.gcl.base_ns});
  return make_gcl(c.gcl.config, c.gcl.slot_unit_ns, c.gcl.slot_units, c.gcl.guard_band, SimTime{c.gcl.base_ns});
}

std::vector<StreamSpec> resolve_streams(const ScenarioConfig& c) {
  std::vector<StreamSpec> all;
  if (c.stream_set == "custom") {
    all = c.custom_streams;
  } else {
    all = build_stream_set(parse_stream_set(c.stream_set));
    const JitterProfile j = JitterProfile::preset(c.jitter);
    for (auto& s : all) s.jitter = j;
    // Custom streams may be appended to a named set.
    all.insert(all.end(), c.custom_streams.begin(), c.custom_streams.end());
  }
  if (!c.active_streams) return all;
  std::vector<StreamSpec> out;
  for (const std::string& name : *c.active_streams) {
    auto it = std::find_if(all.begin(), all.end(), [&](const StreamSpec& s) { return s.name == name; });
    if (it == all.end()) throw ConfigError("active stream '" + name + "' is not defined");
    out.push_back(*it);
  }
  return out;
}

}  // namespace tsnsim
