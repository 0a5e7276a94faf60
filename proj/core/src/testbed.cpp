#include "tsnsim/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <optional>

#include "tsnsim/error.hpp"
#include "tsnsim/event_loop.hpp"
#include "tsnsim/ptp.hpp"
#include "tsnsim/rng.hpp"
#include "tsnsim/sender_tas.hpp"
#include "tsnsim/switch_model.hpp"

namespace tsnsim {
namespace {

constexpr int kSinkNode = 0;
// Receivers latch their timestamp once the first byte is in.
constexpr std::int64_t kFirstByteBits = 1;

struct Nic {
  std::deque<Frame> fifo;
  bool busy = false;
  std::size_t cap = 0;  // 0: unbounded
  std::uint64_t drops = 0;
};

struct Node {
  int id = 0;
  DriftingClock clock;
  std::unique_ptr<PtpPort> ptp;
  Nic nic;

  // PTP exchange in progress.
  bool have_round = false;
  std::uint64_t round = 0;
  std::uint64_t last_round_seen = 0;
  bool seen_any = false;
  PtpTimestamps ts;
  bool t3_latched = false;

  // Sender role.
  int stream = -1;
  std::unique_ptr<StreamGenerator> gen;
  std::int64_t stop_local = 0;
  std::int64_t next_seq = 0;
  std::optional<SenderSchedule> schedule;
  std::unique_ptr<HoldBuffer> hold;
  bool release_pending = false;
  EventId release_id = 0;
  std::uint64_t unfit_drops = 0;
};

class Testbed {
 public:
  Testbed(const ScenarioConfig& cfg, const std::vector<StreamSpec>& streams, bool with_cross, std::uint64_t seed);
  RunResult run();

 private:
  std::vector<EgressConfig> port_configs() const;
  void setup_ptp_round(Node& n, std::uint64_t round, SimTime at);
  void on_port_transmit(int port, const Frame& f, SimTime start);
  void on_dut_local(const Frame& f, SimTime first_bit);
  void ptp_receive(Node& n, const Frame& f, std::int64_t t1);

  void nic_push(Node* owner, Nic& nic, int link, const Frame& f);
  void nic_start(Node* owner, Nic& nic, int link);

  void schedule_emission(Node& n);
  void emit(Node& n, const std::vector<ScheduledFrame>& frames);
  void pump(Node& n);
  void schedule_cross(std::size_t link);

  const ScenarioConfig& cfg_;
  std::vector<StreamSpec> streams_;
  bool with_cross_;
  std::uint64_t seed_;
  EventLoop loop_;
  std::unique_ptr<Switch> dut_;
  DriftingClock gm_clock_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::vector<Nic> cross_nics_;
  std::vector<CrossTrafficGenerator> cross_gens_;
  std::uint64_t next_uid_ = 1;
  RunResult result_;
  SimTime t_cross_{};
  SimTime t_streams_{};
  SimTime t_emit_end_{};
  SimTime t_end_{};
  std::int64_t rate_ = 0;
};

Testbed::Testbed(const ScenarioConfig& cfg, const std::vector<StreamSpec>& streams, bool with_cross, std::uint64_t seed)
    : cfg_(cfg), streams_(streams), with_cross_(with_cross && cfg.cross.rate_bps > 0), seed_(seed),
      rate_(cfg.sw.link_rate_bps) {
  if (streams_.size() > 8) throw ConfigError("at most 8 streams are supported");
  dut_ = std::make_unique<Switch>(loop_, port_configs());
  if (cfg_.record_port_log) dut_->port(kSinkNode).set_logging(true);

  const int num_nodes = 1 + static_cast<int>(streams_.size());
  Rng clock_rng(seed_, "clocks");
  for (int k = 0; k < num_nodes; ++k) {
    auto n = std::make_unique<Node>();
    n->id = k;
    if (cfg_.ptp.enabled) {
      std::int64_t drift = 0;
      const auto& drifts = cfg_.ptp.slave_drift_ppb;
      if (drifts.size() == 1) {
        drift = drifts.front();
      } else if (static_cast<std::size_t>(k) < drifts.size()) {
        drift = drifts[static_cast<std::size_t>(k)];
      } else {
        drift = clock_rng.uniform_int(-cfg_.ptp.max_drift_ppb, cfg_.ptp.max_drift_ppb);
      }
      const std::int64_t offset = clock_rng.uniform_int(-cfg_.ptp.max_initial_offset_ns, cfg_.ptp.max_initial_offset_ns);
      n->clock = DriftingClock(offset, drift);
      if (cfg_.ptp.quantize_8ns) n->clock.set_quantization(8);
      n->ptp = std::make_unique<PtpPort>(k, PtpRole::Slave, &n->clock, cfg_.ptp.sync_rate_per_s, cfg_.ptp.servo);
      result_.ptp.slave_drift_ppb.push_back(drift);
    }
    nodes_.push_back(std::move(n));
  }

  for (int p = 0; p < dut_->num_ports(); ++p) {
    dut_->on_transmit(p, [this, p](const Frame& f, SimTime start, SimTime) { on_port_transmit(p, f, start); });
  }
  dut_->on_local([this](const Frame& f, SimTime first_bit) { on_dut_local(f, first_bit); });

  const SimTime warmup = cfg_.ptp.enabled ? from_seconds(cfg_.ptp.warmup_s) : SimTime{};
  t_cross_ = warmup;
  t_streams_ = t_cross_ + from_seconds(cfg_.link_utilization_wait_s).ns;

  // Streams start at a seeded random phase within one GCL cycle (or their
  // own cycle without TAS).
  std::optional<Gcl> gcl;
  if (cfg_.selection == SelectionPolicy::Tas) gcl = build_gcl(cfg_);
  Rng start_rng(seed_, "start-phase");
  std::int64_t max_offset = 0;
  const std::int64_t duration = from_seconds(cfg_.duration_s).ns;
  for (std::size_t i = 0; i < streams_.size(); ++i) {
    Node& n = *nodes_[i + 1];
    StreamSpec spec = streams_[i];
    std::int64_t offset = spec.start_offset_ns;
    if (cfg_.random_start) {
      const std::int64_t span = gcl ? gcl->cycle_time()
                                    : (spec.periodicity == Periodicity::Cyclic && !spec.replays_trace() ? spec.cycle_ns : 0);
      if (span > 0) offset += start_rng.uniform_int(0, span - 1);
    }
    max_offset = std::max(max_offset, offset);
    spec.start_offset_ns = t_streams_.ns + offset;
    n.stream = static_cast<int>(i);
    n.stop_local = spec.start_offset_ns + duration;
    n.gen = std::make_unique<StreamGenerator>(spec, Rng(seed_, "stream/" + spec.name));
    if (cfg_.sender_tas.enabled) {
      n.schedule = derive_sender_schedule(*gcl, spec.pcp, cfg_.sender_tas.advance_ns, cfg_.sender_tas.dilation);
      n.hold = std::make_unique<HoldBuffer>(cfg_.sender_tas.hold_cap);
    }
    StreamResult sr;
    sr.name = spec.name;
    sr.pcp = spec.pcp;
    result_.streams.push_back(sr);
  }
  t_emit_end_ = t_streams_ + duration + max_offset;
  t_end_ = t_emit_end_ + from_seconds(cfg_.drain_s).ns;
  result_.measurement_start_ns = t_streams_.ns;
  result_.measurement_end_ns = t_end_.ns;

  if (with_cross_) {
    CrossTrafficSpec spec;
    spec.rate_bps = cfg_.cross.rate_bps;
    spec.size_model = cfg_.cross.size_model;
    spec.links = cfg_.cross.links;
    for (int l = 0; l < spec.links; ++l) {
      Nic nic;
      nic.cap = cfg_.cross.nic_queue_frames;
      cross_nics_.push_back(nic);
      cross_gens_.emplace_back(spec, l, Rng(seed_, "cross/link" + std::to_string(l)), t_cross_.ns);
    }
  }
}

std::vector<EgressConfig> Testbed::port_configs() const {
  std::vector<EgressConfig> out;
  const std::size_t ports = 1 + streams_.size();
  for (std::size_t p = 0; p < ports; ++p) {
    EgressConfig e;
    e.link_rate_bps = cfg_.sw.link_rate_bps;
    e.shared_buffer_bytes = cfg_.sw.shared_buffer_bytes;
    e.buffer_alpha = cfg_.sw.buffer_alpha;
    e.cut_through_threshold_bytes = cfg_.sw.cut_through_threshold_bytes;
    e.processing_delay_ns = cfg_.sw.processing_delay_ns;
    if (p == kSinkNode) {
      e.selection = cfg_.selection;
      if (cfg_.selection == SelectionPolicy::Tas) {
        e.gcl = build_gcl(cfg_);
        e.length_check = cfg_.gcl.length_check;
      }
    } else {
      // Ports toward the senders only carry PTP messages.
      e.selection = SelectionPolicy::Spq;
    }
    out.push_back(std::move(e));
  }
  return out;
}

void Testbed::setup_ptp_round(Node& n, std::uint64_t round, SimTime at) {
  loop_.schedule(at, [this, &n, round, at] {
    Frame f;
    f.uid = next_uid_++;
    f.kind = FrameKind::PtpSync;
    f.pcp = kPtpPcp;
    f.on_wire_bytes = kPtpFrameBytes;
    f.node = n.id;
    f.ptp_round = round;
    dut_->inject(f, n.id);
    const SimTime next = at + n.ptp->sync_interval_ns();
    if (next < t_end_) setup_ptp_round(n, round + 1, next);
  });
}

void Testbed::on_port_transmit(int port, const Frame& f, SimTime start) {
  Node& n = *nodes_[static_cast<std::size_t>(port)];
  const SimTime latch = start + bits_time(kFirstByteBits, rate_);
  if (f.kind == FrameKind::Stream) {
    loop_.schedule(latch, [this, &n, f] {
      LatencyRecord r;
      r.stream = f.stream;
      r.seq = f.seq;
      r.tx_ns = f.tx_ts_ns;
      r.rx_ns = n.clock.local_time(loop_.now());
      r.latency_ns = r.rx_ns - r.tx_ns;
      r.frame_bytes = f.on_wire_bytes;
      result_.streams[static_cast<std::size_t>(f.stream)].records.push_back(r);
    });
    return;
  }
  if (f.kind == FrameKind::PtpSync || f.kind == FrameKind::PtpDelayResp) {
    // One-step: the departure timestamp is written as the frame leaves.
    const std::int64_t t1 = gm_clock_.local_time(start);
    loop_.schedule(latch, [this, &n, f, t1] { ptp_receive(n, f, t1); });
  }
}

void Testbed::ptp_receive(Node& n, const Frame& f, std::int64_t t1) {
  if (!n.ptp) return;
  if (f.kind == FrameKind::PtpSync) {
    if (n.have_round) n.ptp->count_timeout();
    if (n.seen_any && f.ptp_round > n.last_round_seen + 1) n.ptp->count_timeout(f.ptp_round - n.last_round_seen - 1);
    if (!n.seen_any && f.ptp_round > 0) n.ptp->count_timeout(f.ptp_round);
    n.seen_any = true;
    n.last_round_seen = f.ptp_round;
    n.have_round = true;
    n.round = f.ptp_round;
    n.t3_latched = false;
    n.ts = {};
    n.ts.t1 = t1;
    n.ts.t2 = n.clock.local_time(loop_.now());
    const std::uint64_t round = f.ptp_round;
    loop_.schedule_in(cfg_.ptp.turnaround_ns, [this, &n, round] {
      if (!n.have_round || n.round != round) return;
      Frame req;
      req.uid = next_uid_++;
      req.kind = FrameKind::PtpDelayReq;
      req.pcp = kPtpPcp;
      req.on_wire_bytes = kPtpFrameBytes;
      req.node = n.id;
      req.ptp_round = round;
      nic_push(&n, n.nic, n.id, req);
    });
    return;
  }
  if (f.kind == FrameKind::PtpDelayResp) {
    if (!n.have_round || n.round != f.ptp_round || !n.t3_latched) return;
    n.ts.t4 = f.ptp_t4;
    n.have_round = false;
    result_.ptp.deviations.push_back(n.ptp->complete_exchange(n.ts, loop_.now(), gm_clock_));
  }
}

void Testbed::on_dut_local(const Frame& f, SimTime first_bit) {
  if (f.kind != FrameKind::PtpDelayReq) return;
  const std::int64_t t4 = gm_clock_.local_time(first_bit + bits_time(kFirstByteBits, rate_));
  const int node = f.node;
  const std::uint64_t round = f.ptp_round;
  // Delay_Resp leaves the DuT CPU shortly after the request is in.
  loop_.schedule(first_bit + serialization_time(kPtpFrameBytes, rate_), [this, node, round, t4] {
    Frame resp;
    resp.uid = next_uid_++;
    resp.kind = FrameKind::PtpDelayResp;
    resp.pcp = kPtpPcp;
    resp.on_wire_bytes = kPtpFrameBytes;
    resp.node = node;
    resp.ptp_round = round;
    resp.ptp_t4 = t4;
    dut_->inject(resp, node);
  });
}

void Testbed::nic_push(Node* owner, Nic& nic, int link, const Frame& f) {
  if (nic.cap != 0 && nic.fifo.size() >= nic.cap) {
    ++nic.drops;
    return;
  }
  nic.fifo.push_back(f);
  if (!nic.busy) nic_start(owner, nic, link);
}

void Testbed::nic_start(Node* owner, Nic& nic, int link) {
  Frame f = std::move(nic.fifo.front());
  nic.fifo.pop_front();
  nic.busy = true;
  const SimTime now = loop_.now();
  if (owner != nullptr) {
    f.tx_ts_ns = owner->clock.local_time(now);
    if (f.kind == FrameKind::PtpDelayReq && owner->have_round && owner->round == f.ptp_round) {
      owner->ts.t3 = f.tx_ts_ns;
      owner->t3_latched = true;
    }
  }
  f.emit_true = now;
  f.ingress_link = link;
  dut_->receive(f, f.kind == FrameKind::PtpDelayReq ? Switch::kToSwitch : kSinkNode, rate_);
  loop_.schedule(now + serialization_time(f.on_wire_bytes, rate_), [this, owner, &nic, link] {
    nic.busy = false;
    if (!nic.fifo.empty()) {
      nic_start(owner, nic, link);
    } else if (owner != nullptr && owner->hold) {
      pump(*owner);
    }
  });
}

void Testbed::schedule_emission(Node& n) {
  if (n.gen->exhausted() || n.gen->next_nominal_ns() >= n.stop_local) return;
  auto frames = n.gen->next();
  if (!frames || frames->empty()) return;
  const SimTime at = std::max(loop_.now(), n.clock.true_time_at(frames->front().emit_ns));
  loop_.schedule(at, [this, &n, fr = std::move(*frames)] {
    emit(n, fr);
    schedule_emission(n);
  });
}

void Testbed::emit(Node& n, const std::vector<ScheduledFrame>& frames) {
  StreamResult& sr = result_.streams[static_cast<std::size_t>(n.stream)];
  const StreamSpec& spec = n.gen->spec();
  for (const ScheduledFrame& sf : frames) {
    Frame f;
    f.uid = next_uid_++;
    f.kind = FrameKind::Stream;
    f.stream = n.stream;
    f.seq = n.next_seq++;
    f.pcp = spec.pcp;
    f.on_wire_bytes = sf.on_wire_bytes;
    f.node = n.id;
    ++sr.emitted;
    if (n.hold) {
      if (!n.hold->push(sf.emit_ns, f)) ++sr.sender_drops;
    } else {
      nic_push(&n, n.nic, n.id, f);
    }
  }
  if (n.hold) pump(n);
}

void Testbed::pump(Node& n) {
  if (n.release_pending) {
    loop_.cancel(n.release_id);
    n.release_pending = false;
  }
  while (!n.hold->empty() && !n.nic.busy) {
    const std::int64_t local_now = n.clock.local_time(loop_.now());
    const std::int64_t desired = std::max(n.hold->front_target(), local_now);
    const std::int64_t dur = serialization_time(n.hold->front().on_wire_bytes, rate_);
    const std::int64_t release = etf_release(*n.schedule, desired, dur);
    if (release == kNever) {
      n.hold->pop();
      ++n.unfit_drops;
      ++result_.streams[static_cast<std::size_t>(n.stream)].sender_drops;
      continue;
    }
    const SimTime at = std::max(loop_.now(), n.clock.true_time_at(release));
    n.release_pending = true;
    n.release_id = loop_.schedule(at, [this, &n] {
      n.release_pending = false;
      if (n.nic.busy || n.hold->empty()) return;
      nic_push(&n, n.nic, n.id, n.hold->pop());
    });
    return;
  }
}

void Testbed::schedule_cross(std::size_t link) {
  const CrossEmission e = cross_gens_[link].next();
  if (SimTime{e.emit_ns} >= t_emit_end_) return;
  loop_.schedule(SimTime{e.emit_ns}, [this, link, e] {
    Frame f;
    f.uid = next_uid_++;
    f.kind = FrameKind::Cross;
    f.pcp = 0;
    f.on_wire_bytes = e.on_wire_bytes;
    f.node = static_cast<int>(nodes_.size());
    ++result_.cross_emitted;
    nic_push(nullptr, cross_nics_[link], static_cast<int>(nodes_.size() + link), f);
    schedule_cross(link);
  });
}

RunResult Testbed::run() {
  if (cfg_.ptp.enabled) {
    const std::int64_t interval = kNsPerSec / cfg_.ptp.sync_rate_per_s;
    const auto slaves = static_cast<std::int64_t>(nodes_.size());
    for (std::int64_t k = 0; k < slaves; ++k) {
      // Spread the slaves' exchanges over the sync interval.
      setup_ptp_round(*nodes_[static_cast<std::size_t>(k)], 0, SimTime{interval * (k + 1) / (slaves + 1)});
    }
  }
  for (std::size_t l = 0; l < cross_gens_.size(); ++l) schedule_cross(l);
  for (std::size_t i = 1; i < nodes_.size(); ++i) schedule_emission(*nodes_[i]);

  result_.events = loop_.run_until(t_end_);

  result_.counters = dut_->counters();
  for (const Nic& nic : cross_nics_) result_.cross_sender_drops += nic.drops;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    result_.streams[i - 1].sender_drops += nodes_[i]->nic.drops;
  }
  // Frames neither delivered nor dropped at a sender count as switch losses.
  for (auto& sr : result_.streams) {
    const std::uint64_t delivered = sr.records.size();
    sr.switch_drops = sr.emitted - sr.sender_drops >= delivered ? sr.emitted - sr.sender_drops - delivered : 0;
  }
  if (cfg_.ptp.enabled) {
    result_.ptp.enabled = true;
    result_.ptp.sync_rate_per_s = cfg_.ptp.sync_rate_per_s;
    for (const auto& n : nodes_) {
      result_.ptp.timeouts += n->ptp->timeouts();
      result_.ptp.anomalies += n->ptp->anomalies();
    }
    for (const DeviationRecord& d : result_.ptp.deviations) {
      if (d.true_ns >= t_streams_.ns && d.true_ns <= t_end_.ns) {
        result_.ptp.max_abs_deviation_ns = std::max<std::int64_t>(result_.ptp.max_abs_deviation_ns, std::llabs(d.deviation_ns));
      }
    }
  }
  if (cfg_.record_port_log) result_.port_log = dut_->port(kSinkNode).log();
  result_.seed = seed_;
  result_.attempt_seed = seed_;
  result_.scenario = cfg_.name;
  result_.finalize();
  return std::move(result_);
}

}  // namespace

RunResult run_attempt(const ScenarioConfig& cfg, const std::vector<StreamSpec>& streams, bool with_cross,
                      std::uint64_t seed) {
  Testbed tb(cfg, streams, with_cross, seed);
  return tb.run();
}

}  // namespace tsnsim
