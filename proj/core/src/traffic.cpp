#include "tsnsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "int128.hpp"
#include "tsnsim/error.hpp"

namespace tsnsim {

std::int64_t serialization_time(std::int64_t on_wire_bytes, std::int64_t rate_bps) {
  if (rate_bps <= 0) throw ConfigError("serialization_time: rate must be positive");
  const auto bits = static_cast<detail::int128>(on_wire_bytes + kWireOverheadBytes) * 8 * kNsPerSec;
  return static_cast<std::int64_t>((bits + rate_bps / 2) / rate_bps);
}

std::int64_t bits_time(std::int64_t bytes, std::int64_t rate_bps) {
  if (rate_bps <= 0) throw ConfigError("bits_time: rate must be positive");
  const auto bits = static_cast<detail::int128>(bytes) * 8 * kNsPerSec;
  return static_cast<std::int64_t>((bits + rate_bps / 2) / rate_bps);
}

JitterProfile JitterProfile::preset(std::string_view name) {
  using K = JitterProfile::Kind;
  if (name == "ideal") return {};
  // Stddev/max columns of the cycle-time precision measurements.
  if (name == "dpdk") return {K::Gaussian, 139, 0.0, 0};
  if (name == "socket") return {K::GaussianWithOutliers, 11'001, 1e-4, 2'254'136};
  if (name == "sender-tas") return {K::Gaussian, 19'205, 0.0, 0};
  throw ConfigError("unknown jitter profile '" + std::string(name) + "'");
}

void StreamSpec::validate() const {
  if (pcp < 0 || pcp > 7) throw ConfigError("stream " + name + ": pcp must be in 0..7");
  if (replays_trace()) return;
  if (periodicity == Periodicity::Cyclic && cycle_ns <= 0) {
    throw ConfigError("stream " + name + ": cyclic stream needs cycle_ns > 0");
  }
  if (periodicity == Periodicity::Acyclic && bitrate_bps <= 0) {
    throw ConfigError("stream " + name + ": acyclic stream needs bitrate_bps > 0");
  }
  if (raw_frame_sizes) {
    if (payload.min_bytes < 64 || payload.max_bytes > kMaxFrameBytes) {
      throw ConfigError("stream " + name + ": raw frame sizes must lie in [64, 1522]");
    }
  } else if (payload.min_bytes < kMinPayloadBytes) {
    throw ConfigError("stream " + name + ": payload below 18 B");
  }
  if (payload.kind == PayloadModel::Kind::Fixed && !raw_frame_sizes &&
      (payload.mean < kMinPayloadBytes || payload.mean > 1e6)) {
    throw ConfigError("stream " + name + ": fixed payload out of range");
  }
}

std::vector<std::int64_t> fragment_payload(std::int64_t app_bytes, std::int64_t max_payload) {
  std::vector<std::int64_t> out;
  if (app_bytes <= 0) return out;
  out.assign(static_cast<std::size_t>(app_bytes / max_payload), max_payload);
  if (app_bytes % max_payload != 0) out.push_back(app_bytes % max_payload);
  return out;
}

StreamGenerator::StreamGenerator(StreamSpec spec, Rng rng) : spec_(std::move(spec)), rng_(std::move(rng)) {
  spec_.validate();
  nominal_ns_ = spec_.start_offset_ns;
  if (!spec_.replays_trace() && spec_.periodicity == Periodicity::Acyclic) {
    nominal_ns_ += std::llround(rng_.exponential(static_cast<double>(mean_gap_ns())));
  }
}

std::int64_t StreamGenerator::mean_gap_ns() const {
  const double frame_bits = (spec_.payload.mean + (spec_.raw_frame_sizes ? 0.0 : kFramingOverheadBytes)) * 8.0;
  return std::max<std::int64_t>(1, std::llround(frame_bits * 1e9 / static_cast<double>(spec_.bitrate_bps)));
}

std::int64_t StreamGenerator::draw_payload() {
  const PayloadModel& m = spec_.payload;
  switch (m.kind) {
    case PayloadModel::Kind::Fixed:
      return std::llround(m.mean);
    case PayloadModel::Kind::Uniform:
      return rng_.uniform_int(m.min_bytes, m.max_bytes);
    case PayloadModel::Kind::Sweep: {
      const std::int64_t span = (m.max_bytes - m.min_bytes) / std::max<std::int64_t>(1, m.step) + 1;
      return m.min_bytes + (index_ % span) * m.step;
    }
    case PayloadModel::Kind::LogNormal: {
      const double v = rng_.lognormal_from_moments(m.mean, m.stddev);
      return std::clamp<std::int64_t>(std::llround(v), m.min_bytes, m.max_bytes);
    }
  }
  return 0;
}

std::int64_t StreamGenerator::draw_displacement() {
  const JitterProfile& j = spec_.jitter;
  if (j.kind == JitterProfile::Kind::Ideal) return 0;
  // Independent per-emission displacement; the interval between two
  // emissions then has stddev equal to the profile's cycle-time stddev.
  double d = rng_.normal(0.0, static_cast<double>(j.stddev_ns) / std::sqrt(2.0));
  if (j.kind == JitterProfile::Kind::GaussianWithOutliers && rng_.bernoulli(j.outlier_prob)) {
    d += static_cast<double>(j.outlier_magnitude_ns);
  }
  return std::llround(d);
}

std::optional<std::vector<ScheduledFrame>> StreamGenerator::next() {
  std::int64_t emit = 0;
  std::int64_t app_bytes = 0;
  if (spec_.replays_trace()) {
    if (index_ >= static_cast<std::int64_t>(spec_.trace.size())) return std::nullopt;
    const TraceRow& row = spec_.trace[static_cast<std::size_t>(index_)];
    emit = spec_.start_offset_ns + row.offset_ns;
    app_bytes = row.payload_bytes;
    ++index_;
    if (index_ < static_cast<std::int64_t>(spec_.trace.size())) {
      nominal_ns_ = spec_.start_offset_ns + spec_.trace[static_cast<std::size_t>(index_)].offset_ns;
    }
  } else {
    emit = nominal_ns_ + draw_displacement();
    if (last_emit_ns_) emit = std::max(emit, *last_emit_ns_ + 1);
    app_bytes = draw_payload();
    ++index_;
    if (spec_.periodicity == Periodicity::Cyclic) {
      nominal_ns_ = spec_.start_offset_ns + index_ * spec_.cycle_ns;
    } else {
      nominal_ns_ += std::max<std::int64_t>(1, std::llround(rng_.exponential(static_cast<double>(mean_gap_ns()))));
    }
  }
  last_emit_ns_ = emit;

  std::vector<ScheduledFrame> frames;
  if (spec_.raw_frame_sizes) {
    frames.push_back({emit, app_bytes - kFramingOverheadBytes, app_bytes});
  } else {
    // a short tail fragment is padded up to the minimum Ethernet frame
    for (std::int64_t p : fragment_payload(app_bytes)) {
      frames.push_back({emit, p, std::max(p, kMinPayloadBytes) + kFramingOverheadBytes});
    }
  }
  return frames;
}

std::vector<ScheduledFrame> generate_schedule(const StreamSpec& spec, std::int64_t duration_ns, Rng& rng) {
  StreamGenerator gen(spec, Rng(rng.next_u64(), spec.name));
  std::vector<ScheduledFrame> out;
  while (!gen.exhausted() && gen.next_nominal_ns() - spec.start_offset_ns < duration_ns) {
    auto frames = gen.next();
    if (!frames) break;
    out.insert(out.end(), frames->begin(), frames->end());
  }
  return out;
}

StreamSetId parse_stream_set(std::string_view name) {
  if (name == "theta" || name == "Θ" || name == "generic") return StreamSetId::Theta;
  if (name == "psi" || name == "Ψ" || name == "real") return StreamSetId::Psi;
  if (name == "omega" || name == "Ω" || name == "spot") return StreamSetId::Omega;
  throw ConfigError("unknown stream set '" + std::string(name) + "'");
}

std::string_view to_string(StreamSetId id) {
  switch (id) {
    case StreamSetId::Theta: return "theta";
    case StreamSetId::Psi: return "psi";
    case StreamSetId::Omega: return "omega";
  }
  return "?";
}

namespace {

StreamSpec cyclic(std::string name, int pcp, std::int64_t cycle_ns, PayloadModel payload) {
  StreamSpec s;
  s.name = std::move(name);
  s.pcp = pcp;
  s.periodicity = Periodicity::Cyclic;
  s.cycle_ns = cycle_ns;
  s.payload = payload;
  return s;
}

}  // namespace

std::vector<StreamSpec> build_stream_set(StreamSetId id) {
  switch (id) {
    case StreamSetId::Theta:
      return {cyclic("theta-high", 6, 200 * kNsPerUs, PayloadModel::fixed(1472)),
              cyclic("theta-med", 5, 300 * kNsPerUs, PayloadModel::fixed(1472)),
              cyclic("theta-low", 4, 500 * kNsPerUs, PayloadModel::fixed(1472))};
    case StreamSetId::Psi:
      return {cyclic("psi-tactile", 6, 1 * kNsPerMs, PayloadModel::fixed(82)),
              cyclic("psi-audio", 5, 24 * kNsPerMs, PayloadModel::fixed(480)),
              cyclic("psi-video", 4, 16'670'000, PayloadModel::lognormal(8336.4, 24283.8))};
    case StreamSetId::Omega: {
      StreamSpec control;
      control.name = "omega-control";
      control.pcp = 6;
      control.periodicity = Periodicity::Acyclic;
      control.payload = PayloadModel::lognormal(501.6, 984.4);
      control.bitrate_bps = 175'000;
      return {control, cyclic("omega-audio", 5, 20 * kNsPerMs, PayloadModel::lognormal(153.9, 46.6)),
              cyclic("omega-camera", 4, 25 * kNsPerMs, PayloadModel::lognormal(62412.5, 60355.9))};
    }
  }
  throw ConfigError("unknown stream set");
}

std::vector<std::int64_t> table_bitrates(StreamSetId id) {
  switch (id) {
    case StreamSetId::Theta: return {61'000'000, 41'000'000, 24'000'000};
    case StreamSetId::Psi: return {1'100'000, 177'000, 4'100'000};
    case StreamSetId::Omega: return {175'000, 82'000, 20'000'000};
  }
  return {};
}

std::int64_t CrossTrafficSpec::mean_gap_per_link_ns(std::int64_t link_rate_bps) const {
  (void)link_rate_bps;
  if (rate_bps <= 0 || links <= 0) return 0;
  const double mean_frame = size_model == SizeModel::FixedMax
                                ? static_cast<double>(max_frame_bytes)
                                : (static_cast<double>(min_frame_bytes) + static_cast<double>(max_frame_bytes)) / 2.0;
  const double bits = (mean_frame + kWireOverheadBytes) * 8.0;
  const double per_link_rate = static_cast<double>(rate_bps) / links;
  return std::llround(bits * 1e9 / per_link_rate);
}

CrossTrafficGenerator::CrossTrafficGenerator(CrossTrafficSpec spec, int link, Rng rng, std::int64_t start_ns)
    : spec_(spec), link_(link), rng_(std::move(rng)), t_ns_(static_cast<double>(start_ns)) {
  const double mean_frame = spec_.size_model == CrossTrafficSpec::SizeModel::FixedMax
                                ? static_cast<double>(spec_.max_frame_bytes)
                                : (static_cast<double>(spec_.min_frame_bytes) + static_cast<double>(spec_.max_frame_bytes)) / 2.0;
  const double per_link_rate = static_cast<double>(spec_.rate_bps) / spec_.links;
  mean_gap_ns_ = (mean_frame + kWireOverheadBytes) * 8.0 * 1e9 / per_link_rate;
}

CrossEmission CrossTrafficGenerator::next() {
  t_ns_ += rng_.exponential(mean_gap_ns_);
  CrossEmission e;
  e.emit_ns = std::llround(t_ns_);
  e.link = link_;
  e.on_wire_bytes = spec_.size_model == CrossTrafficSpec::SizeModel::FixedMax
                        ? spec_.max_frame_bytes
                        : rng_.uniform_int(spec_.min_frame_bytes, spec_.max_frame_bytes);
  return e;
}

std::vector<CrossEmission> poisson_cross_traffic(const CrossTrafficSpec& spec, std::int64_t duration_ns, Rng& rng) {
  std::vector<CrossEmission> out;
  if (spec.rate_bps <= 0 || spec.links <= 0) return out;
  for (int link = 0; link < spec.links; ++link) {
    CrossTrafficGenerator gen(spec, link, Rng(rng.next_u64(), "cross/link" + std::to_string(link)));
    for (CrossEmission e = gen.next(); e.emit_ns < duration_ns; e = gen.next()) out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(), [](const CrossEmission& a, const CrossEmission& b) {
    return a.emit_ns < b.emit_ns;
  });
  return out;
}

StreamSpec load_trace(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file " + path.string());
  StreamSpec spec;
  spec.name = path.stem().string();
  spec.periodicity = Periodicity::Acyclic;
  spec.trace_path = path.string();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_not_of("0123456789,- \t") != std::string::npos) continue;  // header
    std::istringstream row(line);
    std::string a;
    std::string b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) throw ParseError("expected offset_ns,payload_bytes", lineno);
    TraceRow r;
    try {
      std::size_t used_a = 0;
      std::size_t used_b = 0;
      r.offset_ns = std::stoll(a, &used_a);
      r.payload_bytes = std::stoll(b, &used_b);
      if (a.find_first_not_of(" \t", used_a) != std::string::npos || b.find_first_not_of(" \t", used_b) != std::string::npos) {
        throw std::invalid_argument("trailing characters");
      }
    } catch (const std::exception&) {
      throw ParseError("malformed trace row '" + line + "'", lineno);
    }
    if (r.offset_ns < 0 || r.payload_bytes <= 0) throw ParseError("negative offset or non-positive size", lineno);
    if (!spec.trace.empty() && r.offset_ns < spec.trace.back().offset_ns) {
      throw ParseError("trace offsets out of order", lineno);
    }
    spec.trace.push_back(r);
  }
  if (spec.trace.empty() && warnings) warnings->push_back("trace " + path.string() + " is empty");
  return spec;
}

}  // namespace tsnsim
