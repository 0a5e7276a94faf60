#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsnsim/frame.hpp"
#include "tsnsim/rng.hpp"

namespace tsnsim {

/// Serialization time including the 20 B preamble/SFD/IFG, rounded to the
/// nearest ns. Pre: rate_bps > 0.
std::int64_t serialization_time(std::int64_t on_wire_bytes, std::int64_t rate_bps);
/// Time to clock `bytes` bits of frame data in, without wire overhead.
std::int64_t bits_time(std::int64_t bytes, std::int64_t rate_bps);

struct JitterProfile {
  enum class Kind { Ideal, Gaussian, GaussianWithOutliers };
  Kind kind = Kind::Ideal;
  /// Stddev of cycle-time deviation (interval between consecutive emissions).
  std::int64_t stddev_ns = 0;
  double outlier_prob = 0.0;
  std::int64_t outlier_magnitude_ns = 0;

  static JitterProfile ideal() { return {}; }
  /// Named presets: ideal, dpdk, socket, sender-tas.
  static JitterProfile preset(std::string_view name);
};

struct PayloadModel {
  /// Sweep walks min..max in `step` increments, one size per data unit.
  enum class Kind { Fixed, LogNormal, Uniform, Sweep };
  Kind kind = Kind::Fixed;
  double mean = 1472.0;
  double stddev = 0.0;
  /// Truncation bounds for LogNormal, support for Uniform.
  std::int64_t min_bytes = 18;
  std::int64_t max_bytes = 1'000'000;
  std::int64_t step = 1;

  static PayloadModel fixed(std::int64_t bytes) { return {Kind::Fixed, static_cast<double>(bytes), 0.0, bytes, bytes, 1}; }
  static PayloadModel lognormal(double mean, double stddev) { return {Kind::LogNormal, mean, stddev, 18, 1'000'000, 1}; }
  static PayloadModel uniform(std::int64_t lo, std::int64_t hi) {
    return {Kind::Uniform, (lo + hi) / 2.0, 0.0, lo, hi, 1};
  }
  static PayloadModel sweep(std::int64_t lo, std::int64_t hi, std::int64_t step = 1) {
    return {Kind::Sweep, (lo + hi) / 2.0, 0.0, lo, hi, step};
  }
};

struct TraceRow {
  std::int64_t offset_ns = 0;
  std::int64_t payload_bytes = 0;
};

enum class Periodicity { Cyclic, Acyclic };

struct StreamSpec {
  std::string name;
  int pcp = 0;
  Periodicity periodicity = Periodicity::Cyclic;
  std::int64_t cycle_ns = 0;
  PayloadModel payload;
  /// Acyclic streams: link-layer bitrate the renewal process targets.
  std::int64_t bitrate_bps = 0;
  std::int64_t start_offset_ns = 0;
  JitterProfile jitter;
  /// Sizes from `payload` are whole on-wire frame sizes (no framing added).
  bool raw_frame_sizes = false;
  /// Non-empty: replay these rows verbatim instead of generating.
  std::vector<TraceRow> trace;
  /// Where `trace` came from, kept so a scenario can be written back out.
  std::string trace_path;

  /// Trace-driven, even when the trace turned out empty.
  bool replays_trace() const { return !trace.empty() || !trace_path.empty(); }

  /// Throws ConfigError on a violated invariant.
  void validate() const;
};

struct ScheduledFrame {
  std::int64_t emit_ns = 0;
  std::int64_t payload_bytes = 0;
  std::int64_t on_wire_bytes = 0;
};

/// Splits an application data unit into full-size payloads plus remainder.
std::vector<std::int64_t> fragment_payload(std::int64_t app_bytes, std::int64_t max_payload = kMaxPayloadBytes);

/// Stateful per-stream source; yields one application data unit at a time,
/// already fragmented. Emission instants are in the sender's local time.
class StreamGenerator {
 public:
  StreamGenerator(StreamSpec spec, Rng rng);

  /// Frames of the next data unit (all share emit_ns); nullopt when a trace
  /// is exhausted.
  std::optional<std::vector<ScheduledFrame>> next();

  const StreamSpec& spec() const { return spec_; }
  /// Nominal (jitter-free) instant of the unit the next call will yield.
  std::int64_t next_nominal_ns() const { return nominal_ns_; }
  bool exhausted() const { return spec_.replays_trace() && index_ >= static_cast<std::int64_t>(spec_.trace.size()); }

 private:
  std::int64_t draw_payload();
  std::int64_t draw_displacement();
  std::int64_t mean_gap_ns() const;

  StreamSpec spec_;
  Rng rng_;
  std::int64_t index_ = 0;
  std::int64_t nominal_ns_ = 0;
  std::optional<std::int64_t> last_emit_ns_;
};

/// All frames whose nominal emission lies within [start, start + duration).
std::vector<ScheduledFrame> generate_schedule(const StreamSpec& spec, std::int64_t duration_ns, Rng& rng);

enum class StreamSetId { Theta, Psi, Omega };
StreamSetId parse_stream_set(std::string_view name);
std::string_view to_string(StreamSetId id);
std::vector<StreamSpec> build_stream_set(StreamSetId id);
/// Table bitrate (link layer, incl. headers) for each stream of a set.
std::vector<std::int64_t> table_bitrates(StreamSetId id);

struct CrossTrafficSpec {
  enum class SizeModel { FixedMax, UniformFrame };
  std::int64_t rate_bps = 0;
  SizeModel size_model = SizeModel::FixedMax;
  int links = 1;
  std::int64_t min_frame_bytes = 64;
  std::int64_t max_frame_bytes = kMaxFrameBytes;
  int pcp = 0;

  std::int64_t mean_gap_per_link_ns(std::int64_t link_rate_bps = 1'000'000'000) const;
};

struct CrossEmission {
  std::int64_t emit_ns = 0;
  std::int64_t on_wire_bytes = 0;
  int link = 0;
};

/// Poisson arrival process for one cross-traffic link.
class CrossTrafficGenerator {
 public:
  CrossTrafficGenerator(CrossTrafficSpec spec, int link, Rng rng, std::int64_t start_ns = 0);
  CrossEmission next();

 private:
  CrossTrafficSpec spec_;
  int link_;
  Rng rng_;
  double mean_gap_ns_;
  double t_ns_;
};

std::vector<CrossEmission> poisson_cross_traffic(const CrossTrafficSpec& spec, std::int64_t duration_ns, Rng& rng);

/// Reads a CSV trace of (offset_ns, payload_bytes) rows. Empty files give an
/// empty trace and a warning; malformed or decreasing rows throw ParseError.
StreamSpec load_trace(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

}  // namespace tsnsim
