#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "secchain/chain_compiler.hpp"
#include "secchain/topology.hpp"

namespace secchain {

enum class SampleSource : uint8_t { NodeQuery = 0, SwitchReport };

struct LoadSample {
  NodeRef node;
  double cpu_utilization = 0;
  double memory_utilization = 0;
  int64_t sessions = 0;
  int64_t packets_forwarded = 0;
  Tick window_start = 0;
  Tick window_end = 0;
  SampleSource source = SampleSource::NodeQuery;
};

enum class ScaleKind : uint8_t { None = 0, Rebalance, ScaleOut, ScaleIn };

const char* scale_kind_name(ScaleKind k);

struct ScalingDecision {
  ScaleKind kind = ScaleKind::None;
  int victim_index = -1;  // ScaleIn: index into the active list
  double trigger_max = 0;
  double trigger_min = 0;
  double trigger_mean = 0;
};

// Per-group policy inputs for one complete stats window, in active-list order.
struct GroupPolicyInput {
  int active_count = 0;
  int max_active = 0;
  std::vector<double> utils;            // offered / capacity per active
  std::vector<int64_t> offered;         // raw offered counts per active
  int64_t capacity_per_window = 0;
};

// Scaling policy, evaluated in order:
//  (1) Rebalance if max-min utilization exceeds the imbalance gap.
//  (2) ScaleOut if ALL actives exceed the overload threshold and the group
//      can still grow.
//  (3) ScaleIn if mean utilization is below the scale-in threshold, more than
//      one active remains, AND the survivors would stay at or below the
//      overload threshold after absorbing the victim's load (projection
//      guard; prevents ScaleIn/ScaleOut flapping under constant load).
// Victim choice: lowest utilization, ties broken toward the highest ordinal
// (newest node).
ScalingDecision plan_scaling(const GroupPolicyInput& in, const PolicyConfig& policy);

// Failure-response absorption predicate: survivors can take the failed
// node's offered load without any of them exceeding the overload threshold
// (aggregate projection over the post-rebalance spread).
bool can_absorb_failed_load(const std::vector<int64_t>& survivor_offered,
                            int64_t failed_offered, int64_t capacity_per_window,
                            double overload_threshold);

// --- deterministic bucket assignment planning --------------------------------
// Assignments are bucket -> slot (index into a node list). All planners are
// longest-processing-time style: largest bucket first, ties broken toward the
// lowest bucket index, placed onto the least-loaded node (ties toward the
// lowest slot).

// Fresh spread of all buckets across n slots.
std::vector<int> plan_spread(const std::vector<int64_t>& bucket_loads, int slots);

// Pairwise greedy rebalance: repeatedly move the largest movable bucket from
// the most-loaded to the least-loaded slot while the utilization gap exceeds
// the threshold and the move improves it.
std::vector<int> plan_rebalance(std::vector<int> assign,
                                const std::vector<int64_t>& bucket_loads,
                                int slots, int64_t capacity_per_window,
                                double gap_threshold);

// Drain one slot: its buckets are respread across the surviving slots; other
// buckets stay put. Survivor slots keep their indices. `allowed` restricts
// placement (the victim is always excluded); defaults to every other slot.
std::vector<int> plan_drain(std::vector<int> assign,
                            const std::vector<int64_t>& bucket_loads,
                            int victim_slot, int slots,
                            const std::vector<bool>* allowed = nullptr);

// Move every bucket currently on victim_slot to target_slot.
std::vector<int> plan_takeover(std::vector<int> assign, int victim_slot,
                               int target_slot);

}  // namespace secchain
