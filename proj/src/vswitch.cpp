#include "secchain/vswitch.hpp"

namespace secchain {

uint64_t VSwitch::apply_delta(const RuleDelta& delta,
                              const std::function<void(uint64_t)>& on_remove_missing) {
  for (uint64_t key : delta.remove) {
    if (table_.erase(key) == 0 && on_remove_missing) on_remove_missing(key);
  }
  for (const auto& [key, action] : delta.add) table_[key] = action;
  return ++generation_;
}

Action VSwitch::lookup(int service, Direction dir, int bucket, int hop) const {
  auto it = table_.find(pack_match(service, dir, bucket, hop));
  if (it == table_.end()) return Action{};  // default-deny
  return it->second;
}

void VSwitch::configure_groups(int group_count, int buckets) {
  window_bucket_loads_.assign(static_cast<size_t>(group_count),
                              std::vector<int64_t>(static_cast<size_t>(buckets), 0));
}

void VSwitch::note_forward(const NodeRef& node, int group_index, int bucket,
                           int64_t bytes) {
  auto& c = window_counters_[node];
  c.packets_forwarded++;
  c.flow_size_bytes += bytes;
  if (group_index >= 0 &&
      group_index < static_cast<int>(window_bucket_loads_.size()) &&
      bucket >= 0 &&
      bucket < static_cast<int>(window_bucket_loads_[group_index].size())) {
    window_bucket_loads_[group_index][bucket]++;
  }
}

const std::vector<int64_t>& VSwitch::bucket_loads(int group_index) const {
  static const std::vector<int64_t> empty;
  if (group_index < 0 || group_index >= static_cast<int>(window_bucket_loads_.size()))
    return empty;
  return window_bucket_loads_[group_index];
}

TrafficStats VSwitch::take_report(Tick window_start, Tick window_end) {
  TrafficStats stats;
  stats.by_node = std::move(window_counters_);
  stats.window_start = window_start;
  stats.window_end = window_end;
  window_counters_.clear();
  for (auto& group : window_bucket_loads_)
    std::fill(group.begin(), group.end(), 0);
  return stats;
}

std::string VSwitch::dump(const ScenarioConfig& cfg) const {
  RuleSet set = snapshot_rules();
  return "generation " + std::to_string(generation_) + "\n" +
         dump_rules(cfg, set);
}

RuleSet VSwitch::snapshot_rules() const {
  RuleSet set;
  for (const auto& [k, a] : table_) set.rules[k] = a;
  return set;
}

}  // namespace secchain
