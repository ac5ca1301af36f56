#include "secchain/middlebox.hpp"

#include <algorithm>
#include <cmath>

namespace secchain {

bool kind_detects(GroupKind kind, AttackTag tag) {
  switch (kind) {
    case GroupKind::FW:
      return tag == AttackTag::SYNFLOOD || tag == AttackTag::DDOS;
    case GroupKind::WAF:
      return tag == AttackTag::SQLI || tag == AttackTag::XSS;
    case GroupKind::AS:
      return tag == AttackTag::SPAM || tag == AttackTag::VIRUSMAIL;
    case GroupKind::IDS:
      return tag == AttackTag::MALWARE;
    case GroupKind::AV:
      return tag == AttackTag::VIRUSMAIL || tag == AttackTag::MALWARE;
    case GroupKind::SSLVPN:
      return false;
  }
  return false;
}

MiddleboxNode::MiddleboxNode(NodeRef ref, GroupKind kind, double capacity_rps,
                             double window_s, int64_t session_limit,
                             Tick created_at)
    : ref_(ref),
      kind_(kind),
      capacity_rps_(capacity_rps),
      capacity_per_window_(std::llround(capacity_rps * window_s)),
      session_limit_(session_limit),
      created_at_(created_at),
      serving_since_(created_at) {}

Verdict MiddleboxNode::process(const PacketDescriptor& pkt,
                               int64_t inject_window, Tick arrival) {
  Verdict v;
  int64_t offered = ++offered_by_window_[inject_window];
  if (offered > capacity_per_window_) {
    v.kind = Verdict::Kind::DropOverload;  // uninspected: the attack is missed
    return v;
  }
  processed_by_window_[inject_window]++;
  if (pkt.tag != AttackTag::NONE && kind_detects(kind_, pkt.tag)) {
    v.kind = Verdict::Kind::DropDetected;
    v.tag = pkt.tag;
    return v;
  }
  v.kind = Verdict::Kind::Forward;
  FiveTuple key = pkt.tuple.canonical();
  auto it = sessions_.find(key);
  if (it == sessions_.end()) {
    if (static_cast<int64_t>(sessions_.size()) < session_limit_) {
      sessions_.emplace(key, SessionEntry{arrival, arrival, 1});
      pending_export_.push_back(key);
      v.session_created = true;
      v.session_reestablished = pkt.session_packet_index > 0;
    }
  } else {
    it->second.last_seen = arrival;
    it->second.packets++;
  }
  return v;
}

double MiddleboxNode::utilization_for_window(int64_t window) const {
  if (capacity_per_window_ <= 0) return 0;
  return static_cast<double>(offered_in_window(window)) /
         static_cast<double>(capacity_per_window_);
}

int64_t MiddleboxNode::offered_in_window(int64_t window) const {
  auto it = offered_by_window_.find(window);
  return it == offered_by_window_.end() ? 0 : it->second;
}

int64_t MiddleboxNode::processed_in_window(int64_t window) const {
  auto it = processed_by_window_.find(window);
  return it == processed_by_window_.end() ? 0 : it->second;
}

NodeStateSnapshot MiddleboxNode::snapshot(int64_t window) const {
  NodeStateSnapshot s;
  s.ref = ref_;
  s.cpu_utilization = utilization_for_window(window);
  s.sessions = is_standby() ? standby_session_count()
                            : static_cast<int64_t>(sessions_.size());
  s.memory_utilization =
      session_limit_ > 0
          ? static_cast<double>(s.sessions) / static_cast<double>(session_limit_)
          : 0;
  s.processed_in_window = processed_in_window(window);
  return s;
}

std::vector<FiveTuple> MiddleboxNode::session_keys_sorted() const {
  std::vector<FiveTuple> keys;
  keys.reserve(sessions_.size());
  for (const auto& [k, e] : sessions_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

StateUpdate MiddleboxNode::export_update() {
  StateUpdate u;
  u.origin = ref_;
  u.seq = ++export_seq_;
  u.added = std::move(pending_export_);
  pending_export_.clear();
  return u;
}

StateUpdate MiddleboxNode::export_full_snapshot() {
  StateUpdate u;
  u.origin = ref_;
  u.full_snapshot = true;
  export_seq_ = 1;
  u.seq = export_seq_;
  u.added = session_keys_sorted();
  pending_export_.clear();
  return u;
}

ImportResult MiddleboxNode::import_update(const StateUpdate& update) {
  int origin = update.origin.ordinal;
  auto& table = partitions_[origin];
  auto& expected = import_seq_[origin];
  if (update.full_snapshot) {
    table.clear();
    expected = update.seq;
  } else {
    if (update.seq != expected + 1) return ImportResult::NeedSnapshot;
    expected = update.seq;
  }
  for (const auto& key : update.added)
    table.emplace(key, SessionEntry{0, 0, 0});
  return ImportResult::Ok;
}

int64_t MiddleboxNode::standby_session_count() const {
  int64_t n = 0;
  for (const auto& [origin, table] : partitions_)
    n += static_cast<int64_t>(table.size());
  return n;
}

int64_t MiddleboxNode::partition_size(int origin_ordinal) const {
  auto it = partitions_.find(origin_ordinal);
  return it == partitions_.end() ? 0 : static_cast<int64_t>(it->second.size());
}

std::vector<FiveTuple> MiddleboxNode::partition_keys_sorted(
    int origin_ordinal) const {
  std::vector<FiveTuple> keys;
  auto it = partitions_.find(origin_ordinal);
  if (it != partitions_.end()) {
    keys.reserve(it->second.size());
    for (const auto& [k, e] : it->second) keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

void MiddleboxNode::promote(int failed_origin_ordinal, Tick now) {
  auto it = partitions_.find(failed_origin_ordinal);
  if (it != partitions_.end()) {
    sessions_ = std::move(it->second);
  } else {
    sessions_.clear();
  }
  partitions_.clear();
  import_seq_.clear();
  promoted_ = true;
  serving_since_ = now;
}

}  // namespace secchain
