#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "secchain/topology.hpp"

namespace secchain {

// Stable node identity: group index within the config, 1-based ordinal, and
// role. Ordinals are never reused within a run, so a NodeRef uniquely names a
// node across its whole lifetime.
struct NodeRef {
  int group = -1;
  int ordinal = 0;
  bool standby = false;

  bool operator==(const NodeRef&) const = default;
  auto operator<=>(const NodeRef&) const = default;
};

std::string node_id(const ScenarioConfig& cfg, const NodeRef& ref);

struct Action {
  enum class Kind : uint8_t { Forward, Deliver, Drop };
  Kind kind = Kind::Drop;
  NodeRef node;      // Forward
  int service = -1;  // Deliver

  bool operator==(const Action&) const = default;
};

// Exact-match composite key: (service, direction, session bucket, hop index).
struct FlowMatch {
  int service = 0;
  Direction direction = Direction::External;
  int bucket = 0;
  int hop = 0;
};

// Packed match key; field widths bound bucket count to 2^23 and chain length
// to 255, both far beyond anything the validator admits.
inline uint64_t pack_match(int service, Direction dir, int bucket, int hop) {
  return (uint64_t(uint32_t(service)) << 32) |
         (uint64_t(dir == Direction::Internal ? 1 : 0) << 31) |
         (uint64_t(uint32_t(bucket)) << 8) | uint64_t(uint32_t(hop));
}

FlowMatch unpack_match(uint64_t key);

struct RuleSet {
  int buckets = 0;
  std::map<uint64_t, Action> rules;  // ordered: diffs and dumps are stable

  bool operator==(const RuleSet&) const = default;
};

struct RuleDelta {
  std::vector<std::pair<uint64_t, Action>> add;
  std::vector<uint64_t> remove;

  bool empty() const { return add.empty() && remove.empty(); }
};

// Per group: bucket -> assigned active node. Every bucket of every group
// referenced by any chain must be covered.
struct AssignmentPlan {
  // indexed by group, then bucket; a default-constructed NodeRef (ordinal 0)
  // marks an unassigned slot.
  std::vector<std::vector<NodeRef>> by_group;
};

class IncompletePlan : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Compiles the full rule set: for every (service, direction, bucket), hop i
// forwards to the plan's node for the i-th chain group and the final hop
// delivers to the service. Both directions share node assignments.
RuleSet compile(const ScenarioConfig& cfg, const AssignmentPlan& plan);

// Minimal delta: apply(old, diff(old, new)) == new, unchanged rules untouched.
RuleDelta diff(const RuleSet& oldset, const RuleSet& newset);

void apply_delta_to(RuleSet& set, const RuleDelta& delta);

// Stable hash of the direction-canonicalized 5-tuple, modulo bucket count.
int session_bucket(const FiveTuple& tuple, int buckets);

// Flat text dump, one rule per line, sorted, for golden tests:
//   service direction bucket hop -> action
std::string dump_rules(const ScenarioConfig& cfg, const RuleSet& set);

}  // namespace secchain
