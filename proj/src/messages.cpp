#include "secchain/messages.hpp"

namespace secchain {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::ReqQuery: return "ReqQuery";
    case MsgKind::ResQuery: return "ResQuery";
    case MsgKind::ReqReport: return "ReqReport";
    case MsgKind::ResReport: return "ResReport";
    case MsgKind::ReqRelease: return "ReqRelease";
    case MsgKind::ResRelease: return "ResRelease";
    case MsgKind::ReqHeartbeat: return "ReqHeartbeat";
    case MsgKind::ResHeartbeat: return "ResHeartbeat";
    case MsgKind::ReqInform: return "ReqInform";
    case MsgKind::ResInform: return "ResInform";
    case MsgKind::ReqReplace: return "ReqReplace";
    case MsgKind::ResReplace: return "ResReplace";
  }
  return "?";
}

}  // namespace secchain
