#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "secchain/chain_compiler.hpp"
#include "secchain/controller.hpp"
#include "secchain/hotstandby.hpp"
#include "secchain/messages.hpp"
#include "secchain/metrics.hpp"
#include "secchain/middlebox.hpp"
#include "secchain/topology.hpp"
#include "secchain/vswitch.hpp"

namespace secchain {

// Simulation-level failure (event cap exceeded, internal invariant breach).
// The CLI maps this to exit code 3.
class SimAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimCounters {
  // packet conservation: injected == delivered + dropped_switch +
  // dropped_overload + dropped_detected + in_flight, exactly
  int64_t injected = 0;
  int64_t delivered = 0;
  int64_t dropped_switch = 0;    // table miss + forward to dead node
  int64_t dropped_overload = 0;  // uninspected capacity drops
  int64_t dropped_detected = 0;  // inspection verdicts
  int64_t in_flight = 0;         // fate lands beyond the run end

  // attack partition: attacks_injected == detected + missed_overload +
  // dropped_switch + delivered + in_flight
  int64_t attacks_injected = 0;
  int64_t attacks_detected = 0;
  int64_t attacks_missed_overload = 0;
  int64_t attacks_dropped_switch = 0;
  int64_t attacks_delivered = 0;  // slipped through (no detecting hop)
  int64_t attacks_in_flight = 0;

  int64_t re_established = 0;      // sessions recreated after a move/loss
  int64_t sessions_lost_total = 0; // failure responses that discarded state
};

struct ResponseRecord {
  std::string group;
  std::string kind;  // rebalance | scale_out | scale_in | switchover | create
  Tick completed = 0;
  double elapsed_s = 0;
};

// Session bookkeeping around one injected node failure, for the
// session-preservation oracles.
struct FailureAudit {
  std::string node;
  std::string resolution;  // switchover | rebalance | create | standby-lost
  Tick fault_time = 0;
  Tick resolved_time = 0;
  int64_t sessions_at_failure = 0;
  int64_t sessions_lost = 0;
  std::vector<FiveTuple> pre_failure_keys;
  std::vector<FiveTuple> post_switchover_keys;  // switchover only
};

struct SimResult {
  SimCounters counters;
  std::vector<MetricPoint> metrics;
  std::vector<LogRecord> logs;
  std::vector<Message> messages;  // full protocol trace (not persisted)
  std::vector<ResponseRecord> responses;
  std::vector<FailureAudit> failure_audits;
  std::vector<SwitchoverRecord> switchovers;
  std::map<std::string, int> final_actives;   // group id -> alive actives
  std::map<std::string, int> final_standbys;  // group id -> alive standbys
  uint64_t event_count = 0;
  std::string rules_dump;  // final flow table, text format
};

// Runs one scenario to completion. Deterministic: (seed, config) fully
// determines every output byte.
SimResult run_simulation(const ScenarioConfig& cfg);

// Deterministic [0,1) draw used everywhere randomness is needed; hand-rolled
// from the engine's raw output because distribution implementations differ
// across standard libraries.
double uniform01(std::mt19937_64& rng);

uint64_t splitmix64(uint64_t x);

// Client endpoint synthesis: the k-th client (global index across workload
// entries) gets a source port chosen so its canonical 5-tuple lands in
// session bucket k mod B, making per-bucket load arithmetic exact.
FiveTuple synth_client_tuple(int global_client_index, int service_index,
                             int buckets);

}  // namespace secchain
