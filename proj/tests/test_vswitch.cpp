#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "secchain/vswitch.hpp"

using namespace secchain;

namespace {

ScenarioConfig one_group_cfg(int buckets) {
  return parse_config_text(
      R"({"groups": [{"id": "g0", "kind": "FW", "initial_active": 1,
                      "max_active": 3, "node_capacity": 100}],
          "chains": [{"id": "c0", "hops": ["g0"]}],
          "services": [{"id": "s0", "kind": "web", "chain": "c0"}],
          "policy": {"session_buckets": )" +
      std::to_string(buckets) + R"(}, "duration_s": 1})");
}

AssignmentPlan plan_all_to(const ScenarioConfig& cfg, int ordinal) {
  AssignmentPlan p;
  p.by_group.resize(cfg.groups.size());
  for (size_t g = 0; g < cfg.groups.size(); ++g)
    p.by_group[g].assign(cfg.policy.session_buckets,
                         NodeRef{static_cast<int>(g), ordinal, false});
  return p;
}

}  // namespace

TEST_CASE("default deny: empty table drops everything") {
  VSwitch sw;
  Action a = sw.lookup(0, Direction::External, 0, 0);
  CHECK(a.kind == Action::Kind::Drop);
  CHECK(sw.rule_count() == 0);
}

TEST_CASE("empty delta bumps the generation and changes nothing") {
  ScenarioConfig cfg = one_group_cfg(4);
  VSwitch sw;
  RuleSet rs = compile(cfg, plan_all_to(cfg, 1));
  sw.apply_delta(diff(RuleSet{}, rs));
  uint64_t gen = sw.generation();
  size_t rules = sw.rule_count();

  uint64_t after = sw.apply_delta(RuleDelta{});
  CHECK(after == gen + 1);
  CHECK(sw.rule_count() == rules);
  CHECK(sw.lookup(0, Direction::External, 0, 0).kind == Action::Kind::Forward);
}

TEST_CASE("scale-out delta retargets exactly the moved buckets") {
  ScenarioConfig cfg = one_group_cfg(4);
  VSwitch sw;
  RuleSet before = compile(cfg, plan_all_to(cfg, 1));
  sw.apply_delta(diff(RuleSet{}, before));

  // Pre-install, bucket 2 still routes to node 1.
  CHECK(sw.lookup(0, Direction::External, 2, 0).node.ordinal == 1);

  AssignmentPlan moved = plan_all_to(cfg, 1);
  moved.by_group[0][2] = NodeRef{0, 3, false};
  RuleSet after = compile(cfg, moved);
  sw.apply_delta(diff(before, after));

  CHECK(sw.lookup(0, Direction::External, 2, 0).node.ordinal == 3);
  CHECK(sw.lookup(0, Direction::Internal, 2, 0).node.ordinal == 3);
  CHECK(sw.lookup(0, Direction::External, 1, 0).node.ordinal == 1);
  CHECK(sw.snapshot_rules().rules == after.rules);
}

TEST_CASE("applying a delta then its inverse restores the table") {
  ScenarioConfig cfg = one_group_cfg(8);
  RuleSet a = compile(cfg, plan_all_to(cfg, 1));
  AssignmentPlan p2 = plan_all_to(cfg, 2);
  p2.by_group[0][5] = NodeRef{0, 1, false};
  RuleSet b = compile(cfg, p2);

  VSwitch sw;
  sw.apply_delta(diff(RuleSet{}, a));
  RuleSet original = sw.snapshot_rules();
  sw.apply_delta(diff(a, b));
  CHECK(sw.snapshot_rules().rules == b.rules);
  sw.apply_delta(diff(b, a));
  CHECK(sw.snapshot_rules().rules == original.rules);
}

TEST_CASE("removes are idempotent and reported") {
  VSwitch sw;
  RuleDelta d;
  d.remove.push_back(pack_match(0, Direction::External, 0, 0));
  std::vector<uint64_t> missing;
  sw.apply_delta(d, [&](uint64_t k) { missing.push_back(k); });
  CHECK(missing.size() == 1);
  CHECK(missing[0] == pack_match(0, Direction::External, 0, 0));
  CHECK(sw.rule_count() == 0);

  // Removing a present rule reports nothing; removing it again reports once.
  RuleDelta add;
  add.add.push_back({pack_match(0, Direction::External, 0, 0),
                     Action{Action::Kind::Deliver, {}, 0}});
  sw.apply_delta(add);
  missing.clear();
  sw.apply_delta(d, [&](uint64_t k) { missing.push_back(k); });
  CHECK(missing.empty());
  sw.apply_delta(d, [&](uint64_t k) { missing.push_back(k); });
  CHECK(missing.size() == 1);
}

TEST_CASE("traffic accounting: totals, per-bucket loads, window reset") {
  VSwitch sw;
  sw.configure_groups(2, 4);
  NodeRef n1{0, 1, false}, n2{0, 2, false}, m1{1, 1, false};

  // 2400 packets spread over two nodes of group 0, 10 through group 1.
  for (int i = 0; i < 2400; ++i)
    sw.note_forward(i % 2 ? n2 : n1, 0, i % 4, 1500);
  for (int i = 0; i < 10; ++i) sw.note_forward(m1, 1, 0, 500);

  const auto& loads = sw.bucket_loads(0);
  REQUIRE(loads.size() == 4);
  CHECK(loads[0] + loads[1] + loads[2] + loads[3] == 2400);
  CHECK(loads[0] == 600);

  TrafficStats stats = sw.take_report(0, kTicksPerSecond);
  CHECK(stats.window_start == 0);
  CHECK(stats.window_end == kTicksPerSecond);
  REQUIRE(stats.by_node.size() == 3);
  CHECK(stats.by_node.at(n1).packets_forwarded == 1200);
  CHECK(stats.by_node.at(n2).packets_forwarded == 1200);
  CHECK(stats.by_node.at(n1).flow_size_bytes == 1200 * 1500);
  CHECK(stats.by_node.at(m1).packets_forwarded == 10);

  int64_t total = 0;
  for (const auto& [node, pn] : stats.by_node) total += pn.packets_forwarded;
  CHECK(total == 2410);

  // Counters are windowed deltas: after the report everything is zero.
  TrafficStats empty = sw.take_report(kTicksPerSecond, 2 * kTicksPerSecond);
  CHECK(empty.by_node.empty());
  const auto& loads_after = sw.bucket_loads(0);
  CHECK(loads_after[0] + loads_after[1] + loads_after[2] + loads_after[3] == 0);
}

TEST_CASE("generation increments once per applied delta") {
  VSwitch sw;
  CHECK(sw.generation() == 0);
  sw.apply_delta(RuleDelta{});
  sw.apply_delta(RuleDelta{});
  CHECK(sw.generation() == 2);
}

TEST_CASE("table dump matches the compiler text format") {
  ScenarioConfig cfg = one_group_cfg(2);
  VSwitch sw;
  sw.apply_delta(diff(RuleSet{}, compile(cfg, plan_all_to(cfg, 1))));
  std::string dump = sw.dump(cfg);
  CHECK(dump.find("s0 external 0 0 -> forward g0-1") != std::string::npos);
  CHECK(dump.find("generation") != std::string::npos);
}
