#pragma once

#include <cstdint>

#include "tsnsim/sim_time.hpp"

namespace tsnsim {

/// Ethernet + VLAN tag + IPv4 + UDP headers + FCS around the UDP payload.
inline constexpr std::int64_t kFramingOverheadBytes = 14 + 4 + 20 + 8 + 4;
/// Preamble, SFD and inter-frame gap; occupies the wire but is not part of the frame.
inline constexpr std::int64_t kWireOverheadBytes = 7 + 1 + 12;
inline constexpr std::int64_t kMaxPayloadBytes = 1472;
inline constexpr std::int64_t kMinPayloadBytes = 18;
inline constexpr std::int64_t kMaxFrameBytes = kMaxPayloadBytes + kFramingOverheadBytes;
inline constexpr std::int64_t kPtpFrameBytes = 90;
inline constexpr int kPtpPcp = 7;
inline constexpr int kNumQueues = 8;

enum class FrameKind : std::uint8_t { Stream, Cross, PtpSync, PtpDelayReq, PtpDelayResp };

inline bool is_ptp(FrameKind k) {
  return k == FrameKind::PtpSync || k == FrameKind::PtpDelayReq || k == FrameKind::PtpDelayResp;
}

/// One frame on the wire. tx_ts_ns is the sender's local clock at the first
/// bit on the wire, carried in the payload; seq lives in the IPv4 ID field.
struct Frame {
  std::uint64_t uid = 0;
  FrameKind kind = FrameKind::Stream;
  int stream = -1;
  std::int64_t seq = 0;
  int pcp = 0;
  std::int64_t on_wire_bytes = kMaxFrameBytes;
  std::int64_t tx_ts_ns = 0;
  SimTime emit_true{};
  /// Sender node for uplink frames, destination node for DuT-originated PTP.
  int node = -1;
  int ingress_link = -1;
  /// PTP round this message belongs to.
  std::uint64_t ptp_round = 0;
  /// Delay_Resp payload: DuT receive timestamp of the Delay_Req.
  std::int64_t ptp_t4 = 0;
};

}  // namespace tsnsim
