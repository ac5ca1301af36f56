#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "secchain/chain_compiler.hpp"

namespace secchain {

// Windowed per-node forwarding counters, reset on report.
struct TrafficStats {
  struct PerNode {
    int64_t packets_forwarded = 0;
    int64_t flow_size_bytes = 0;
  };
  std::map<NodeRef, PerNode> by_node;  // ordered for stable reporting
  Tick window_start = 0;
  Tick window_end = 0;
};

// The forwarding element: holds the flow table, answers per-hop lookups, and
// accumulates traffic statistics for the controller.
class VSwitch {
 public:
  VSwitch() = default;

  // Atomic delta application; removals of absent rules are idempotent and
  // reported through the callback so the caller can log them.
  uint64_t apply_delta(const RuleDelta& delta,
                       const std::function<void(uint64_t)>& on_remove_missing = {});

  uint64_t generation() const { return generation_; }
  size_t rule_count() const { return table_.size(); }

  // Default-deny: a miss returns Drop.
  Action lookup(int service, Direction dir, int bucket, int hop) const;

  void configure_groups(int group_count, int buckets);
  void note_forward(const NodeRef& node, int group_index, int bucket,
                    int64_t bytes);

  // Per-group per-bucket forwarded counts for the current window; the
  // controller uses these to weight bucket reassignment.
  const std::vector<int64_t>& bucket_loads(int group_index) const;

  // Drains the current window's counters (ReqMessage_report payload).
  TrafficStats take_report(Tick window_start, Tick window_end);

  // Flow-table dump in the compiler's text format, plus generation.
  std::string dump(const ScenarioConfig& cfg) const;

  RuleSet snapshot_rules() const;

 private:
  std::unordered_map<uint64_t, Action> table_;
  uint64_t generation_ = 0;
  std::map<NodeRef, TrafficStats::PerNode> window_counters_;
  std::vector<std::vector<int64_t>> window_bucket_loads_;  // [group][bucket]
};

}  // namespace secchain
