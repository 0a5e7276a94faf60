#include "tsnsim/ptp.hpp"

#include "tsnsim/error.hpp"

namespace tsnsim {

PtpPort::PtpPort(int id, PtpRole role, DriftingClock* clock, int sync_rate_per_s, PiServoConfig servo)
    : id_(id), role_(role), clock_(clock), sync_rate_(sync_rate_per_s), servo_(servo) {
  if (clock_ == nullptr) throw ConfigError("PTP port needs a clock");
  if (sync_rate_ <= 0) throw ConfigError("sync rate must be positive");
}

DeviationRecord PtpPort::complete_exchange(const PtpTimestamps& ts, SimTime now, const DriftingClock& gm) {
  if (role_ != PtpRole::Slave) throw ConfigError("the grandmaster clock is never disciplined");
  const PathDelay pd = compute_path_delay(ts.t1, ts.t2, ts.t3, ts.t4);
  last_path_delay_ns_ = pd.delay_ns;
  if (pd.anomaly) ++anomalies_;
  const std::int64_t offset = compute_offset(ts.t1, ts.t2, ts.t3, ts.t4);

  DeviationRecord rec{now.ns, id_, clock_->local_time(now) - gm.local_time(now)};
  log_.push_back(rec);
  ++rounds_;

  const PiServo::Decision d = servo_.sample(offset, ts.t2, sync_interval_ns());
  if (d.apply_frequency) clock_->set_frequency_adjustment(now, d.freq_adj_ppb);
  if (d.step_ns != 0) clock_->step(now, d.step_ns);
  return rec;
}

DeviationRecord ptp_sync_round(PtpPort& master, PtpPort& slave, const PathDescriptor& path, SimTime start) {
  if (master.role() != PtpRole::Grandmaster || slave.role() != PtpRole::Slave) {
    throw ConfigError("ptp_sync_round needs a grandmaster and a slave");
  }
  PtpTimestamps ts;
  ts.t1 = master.clock().local_time(start);
  const SimTime sync_rx = start + path.master_to_slave_ns;
  ts.t2 = slave.clock().local_time(sync_rx);
  const SimTime req_tx = sync_rx + path.turnaround_ns;
  ts.t3 = slave.clock().local_time(req_tx);
  const SimTime req_rx = req_tx + path.slave_to_master_ns;
  ts.t4 = master.clock().local_time(req_rx);
  return slave.complete_exchange(ts, req_rx + path.response_ns, master.clock());
}

}  // namespace tsnsim
