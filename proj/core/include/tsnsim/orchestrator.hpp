#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tsnsim/run_result.hpp"
#include "tsnsim/scenario.hpp"

namespace tsnsim {

inline constexpr int kMaxAttempts = 10;

using LogFn = std::function<void(const std::string&)>;

/// One attempt at the given seed; isolate_streams runs every stream on its
/// own and merges the results.
RunResult run_single(const ScenarioConfig& cfg, std::uint64_t seed);

/// Validates, then repeats the attempt with derived seeds while the PTP
/// deviation during measurement exceeds the threshold. Throws ScenarioError
/// after ptp.max_attempts failures.
RunResult run_scenario(const ScenarioConfig& cfg, const LogFn& log = {});

/// Seed of attempt `attempt` (0-based) for a scenario seed.
std::uint64_t attempt_seed(std::uint64_t seed, int attempt);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

/// Parses "key=v1,v2,...". Throws ConfigError.
SweepAxis parse_vary(std::string_view text);

struct SweepPoint {
  /// Directory-friendly label such as "gcl.slot_units=3".
  std::string label;
  ScenarioConfig config;
};

/// Cartesian product of all axes applied to a scenario JSON text.
std::vector<SweepPoint> expand_sweep(std::string_view json_text, const std::vector<SweepAxis>& axes,
                                     const std::filesystem::path& base_dir = {});

}  // namespace tsnsim
