#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsnsim/clock.hpp"
#include "tsnsim/egress_port.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/traffic.hpp"

namespace tsnsim {

struct GclSettings {
  /// 1..4 selects a template; 0 means `entries` is used verbatim.
  int config = 1;
  std::int64_t slot_unit_ns = 15'000;
  int slot_units = 1;
  bool guard_band = false;
  bool length_check = false;
  std::vector<GclEntry> entries;
  std::int64_t base_ns = 0;
};

struct SwitchSettings {
  std::int64_t link_rate_bps = 1'000'000'000;
  std::int64_t processing_delay_ns = 2'190;
  std::int64_t shared_buffer_bytes = 18'000;
  double buffer_alpha = 2.0;
  std::int64_t cut_through_threshold_bytes = 337;
};

struct CrossSettings {
  std::int64_t rate_bps = 0;
  CrossTrafficSpec::SizeModel size_model = CrossTrafficSpec::SizeModel::FixedMax;
  int links = 2;
  /// Frames the cross-traffic NIC may hold per link before dropping.
  std::size_t nic_queue_frames = 512;
};

struct SenderTasSettings {
  bool enabled = false;
  /// Lead of sender windows over switch windows: processing delay plus
  /// accumulation of a full cut-through prefix, minus a 100 ns margin.
  std::int64_t advance_ns = 2'190 + 337 * 8 - 100;
  int dilation = 1;
  std::size_t hold_cap = 1024;
};

struct PtpSettings {
  bool enabled = true;
  int sync_rate_per_s = 16;
  double warmup_s = 5.0;
  std::int64_t deviation_threshold_ns = 100;
  /// Per-slave natural drift (sink first, then senders). Empty: seeded
  /// uniform draw in +-max_drift_ppb. One value: used for every slave.
  std::vector<std::int64_t> slave_drift_ppb;
  std::int64_t max_drift_ppb = 100'000;
  /// Initial clock offsets are drawn uniformly in +-this bound.
  std::int64_t max_initial_offset_ns = 1'000'000;
  bool quantize_8ns = false;
  int max_attempts = 10;
  std::int64_t turnaround_ns = 20'000;
  PiServoConfig servo;
};

struct OutputSettings {
  std::string dir;
  std::vector<std::string> formats{"csv", "json", "svg"};
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::optional<std::uint64_t> seed;
  double duration_s = 10.0;
  double drain_s = 0.01;
  /// "theta", "psi", "omega" or "custom".
  std::string stream_set = "theta";
  std::vector<StreamSpec> custom_streams;
  /// Names of streams to run; empty optional = all streams of the set.
  std::optional<std::vector<std::string>> active_streams;
  /// Run every stream alone (no other stream, no cross traffic) and merge.
  bool isolate_streams = false;
  /// Jitter preset for streams that do not name their own.
  std::string jitter = "ideal";
  bool random_start = true;
  CrossSettings cross;
  SelectionPolicy selection = SelectionPolicy::Spq;
  GclSettings gcl;
  SwitchSettings sw;
  SenderTasSettings sender_tas;
  PtpSettings ptp;
  double link_utilization_wait_s = 0.1;
  bool record_port_log = false;
  OutputSettings output;

  /// Throws ConfigError; a missing seed is rejected.
  void validate() const;
};

/// Parses the JSON scenario format (see docs/scenario-format.md). Relative
/// trace paths resolve against base_dir.
ScenarioConfig parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Full JSON rendering with every default spelled out.
std::string dump_scenario(const ScenarioConfig& cfg);

/// Sets dotted keys (e.g. "gcl.slot_units") in a scenario JSON text. Values
/// are read as JSON when they parse as such, otherwise as strings.
std::string apply_overrides(std::string_view json_text, const std::vector<std::pair<std::string, std::string>>& kv);

std::vector<std::string> bundled_scenario_ids();
/// Throws ConfigError for an unknown id.
ScenarioConfig bundled_scenario(std::string_view id);

/// Gate control list the scenario's TAS port uses.
Gcl build_gcl(const ScenarioConfig& cfg);
/// Streams of the configured set after active-stream filtering and jitter
/// defaults (start offsets untouched).
std::vector<StreamSpec> resolve_streams(const ScenarioConfig& cfg);

}  // namespace tsnsim
