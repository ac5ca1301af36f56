#pragma once

#include <cstdint>
#include <string>

#include "secchain/sim_time.hpp"

namespace secchain {

// Control-plane protocol vocabulary. Every Req variant is answered by its Res
// variant or a logged drop (dead receiver).
enum class MsgKind : uint8_t {
  ReqQuery = 0,
  ResQuery,
  ReqReport,
  ResReport,
  ReqRelease,
  ResRelease,
  ReqHeartbeat,
  ResHeartbeat,
  ReqInform,
  ResInform,
  ReqReplace,
  ResReplace,
};

const char* msg_kind_name(MsgKind k);
inline bool is_request(MsgKind k) { return (static_cast<int>(k) & 1) == 0; }
inline MsgKind response_for(MsgKind req) {
  return static_cast<MsgKind>(static_cast<int>(req) + 1);
}

// Well-known endpoint handles; node endpoints are non-negative registry
// indices.
inline constexpr int kEndpointController = -1;
inline constexpr int kEndpointSwitch = -2;

struct Message {
  MsgKind kind = MsgKind::ReqQuery;
  int sender = kEndpointController;
  int receiver = kEndpointController;
  Tick send_time = 0;
  Tick deliver_time = 0;
  // Small payload slots; meaning depends on kind:
  //   ReqInform/ResInform: p1 = state-update index, p2 = origin node handle
  //   ReqReplace:          p1 = failed node handle, p2 = standby node handle
  //   ResReplace:          p1 = failed node handle, p2 = 1 accept / 0 reject
  //   ReqHeartbeat/Res:    p1 = prober handle (the peer tracking liveness)
  int64_t p1 = 0;
  int64_t p2 = 0;
  bool dropped = false;  // receiver dead at delivery
};

}  // namespace secchain
