#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "secchain/chain_compiler.hpp"
#include "secchain/packet.hpp"
#include "secchain/topology.hpp"

namespace secchain {

// Detection set per middlebox kind. SSLVPN detects nothing; it transforms
// (marks the packet encrypted) and adds per-packet processing latency.
bool kind_detects(GroupKind kind, AttackTag tag);

struct SessionEntry {
  Tick established_at = 0;
  Tick last_seen = 0;
  int64_t packets = 0;
};

using SessionTable = std::unordered_map<FiveTuple, SessionEntry, TupleHash>;

struct Verdict {
  enum class Kind : uint8_t { Forward, DropDetected, DropOverload };
  Kind kind = Kind::Forward;
  AttackTag tag = AttackTag::NONE;   // DropDetected only
  bool session_created = false;
  bool session_reestablished = false;
};

struct NodeStateSnapshot {
  NodeRef ref;
  double cpu_utilization = 0;     // offered window load / capacity; may exceed 1
  double memory_utilization = 0;  // sessions / session_table_limit
  int64_t sessions = 0;
  int64_t processed_in_window = 0;
};

// Session-table delta shipped from an active to its group standby. Updates
// are sequenced per origin; a gap forces a full snapshot.
struct StateUpdate {
  NodeRef origin;
  uint64_t seq = 0;
  bool full_snapshot = false;
  std::vector<FiveTuple> added;
};

enum class ImportResult { Ok, NeedSnapshot };

class MiddleboxNode {
 public:
  MiddleboxNode(NodeRef ref, GroupKind kind, double capacity_rps,
                double window_s, int64_t session_limit, Tick created_at);

  const NodeRef& ref() const { return ref_; }
  GroupKind kind() const { return kind_; }
  bool alive() const { return alive_; }
  void kill() { alive_ = false; }
  Tick created_at() const { return created_at_; }
  // When the node (re)entered the serving role: creation for actives,
  // promotion time for a standby that took over. Utilization windows that
  // start before this are not representative samples.
  Tick serving_since() const { return serving_since_; }
  bool is_standby() const { return ref_.standby && !promoted_; }

  // Inspects one packet. Capacity is a per-window token budget keyed by the
  // packet's injection window, so rule transitions at window boundaries stay
  // exact. Overloaded packets are dropped uninspected (attacks are missed).
  Verdict process(const PacketDescriptor& pkt, int64_t inject_window,
                  Tick arrival);

  // Offered load (inspected or not) for one window, as a fraction of capacity.
  double utilization_for_window(int64_t window) const;
  int64_t offered_in_window(int64_t window) const;
  int64_t processed_in_window(int64_t window) const;
  NodeStateSnapshot snapshot(int64_t window) const;

  int64_t capacity_per_window() const { return capacity_per_window_; }
  const SessionTable& sessions() const { return sessions_; }
  std::vector<FiveTuple> session_keys_sorted() const;

  // --- active side of state replication ---
  bool has_pending_export() const { return !pending_export_.empty(); }
  StateUpdate export_update();        // delta since last export
  StateUpdate export_full_snapshot(); // resets the sequence for the receiver

  // --- standby side ---
  ImportResult import_update(const StateUpdate& update);
  int64_t standby_session_count() const;
  int64_t partition_size(int origin_ordinal) const;
  std::vector<FiveTuple> partition_keys_sorted(int origin_ordinal) const;

  // Switchover: the standby adopts the failed origin's partition as its live
  // session table and becomes an active node.
  void promote(int failed_origin_ordinal, Tick now);

 private:
  NodeRef ref_;
  GroupKind kind_;
  double capacity_rps_;
  int64_t capacity_per_window_;
  int64_t session_limit_;
  Tick created_at_;
  Tick serving_since_;
  bool alive_ = true;
  bool promoted_ = false;

  SessionTable sessions_;
  std::vector<FiveTuple> pending_export_;
  uint64_t export_seq_ = 0;

  // standby state: per-origin disjoint partitions and expected sequences
  std::map<int, SessionTable> partitions_;
  std::map<int, uint64_t> import_seq_;

  std::unordered_map<int64_t, int64_t> offered_by_window_;
  std::unordered_map<int64_t, int64_t> processed_by_window_;
};

}  // namespace secchain
