#pragma once

#include <cstdint>
#include <vector>

#include "tsnsim/run_result.hpp"
#include "tsnsim/scenario.hpp"
#include "tsnsim/traffic.hpp"

namespace tsnsim {

/// Builds the star topology (sink node0, one sender per stream, a
/// cross-traffic node on `cross.links` links, the DuT as grandmaster) and
/// runs one attempt of the measurement procedure:
///   PTP warm-up -> cross traffic on -> wait for link utilization ->
///   streams on for duration_s -> drain.
/// No retry logic; the returned PtpResult carries the health figure.
RunResult run_attempt(const ScenarioConfig& cfg, const std::vector<StreamSpec>& streams, bool with_cross,
                      std::uint64_t seed);

}  // namespace tsnsim
