#include "secchain/chain_compiler.hpp"

#include <algorithm>

namespace secchain {

std::string node_id(const ScenarioConfig& cfg, const NodeRef& ref) {
  if (ref.group < 0 || ref.group >= static_cast<int>(cfg.groups.size()))
    return "?-" + std::to_string(ref.ordinal);
  return cfg.groups[ref.group].id + "-" + (ref.standby ? "s" : "") +
         std::to_string(ref.ordinal);
}

FlowMatch unpack_match(uint64_t key) {
  FlowMatch m;
  m.service = static_cast<int>(key >> 32);
  m.direction = ((key >> 31) & 1) ? Direction::Internal : Direction::External;
  m.bucket = static_cast<int>((key >> 8) & 0x7fffff);
  m.hop = static_cast<int>(key & 0xff);
  return m;
}

RuleSet compile(const ScenarioConfig& cfg, const AssignmentPlan& plan) {
  RuleSet out;
  out.buckets = cfg.policy.session_buckets;
  const int B = out.buckets;
  for (size_t si = 0; si < cfg.services.size(); ++si) {
    const auto& chain = chain_for_service(cfg, cfg.services[si].id);
    std::vector<int> hop_groups;
    for (const auto& gid : chain.hops) hop_groups.push_back(cfg.group_index(gid));
    for (int dirn = 0; dirn < 2; ++dirn) {
      Direction dir = dirn ? Direction::Internal : Direction::External;
      for (int b = 0; b < B; ++b) {
        for (size_t h = 0; h < hop_groups.size(); ++h) {
          int gi = hop_groups[h];
          if (gi < 0 || gi >= static_cast<int>(plan.by_group.size()) ||
              b >= static_cast<int>(plan.by_group[gi].size()) ||
              plan.by_group[gi][b].ordinal == 0) {
            throw IncompletePlan("no node assigned for group " +
                                 chain.hops[h] + " bucket " + std::to_string(b));
          }
          Action a;
          a.kind = Action::Kind::Forward;
          a.node = plan.by_group[gi][b];
          out.rules[pack_match(static_cast<int>(si), dir, b, static_cast<int>(h))] = a;
        }
        Action deliver;
        deliver.kind = Action::Kind::Deliver;
        deliver.service = static_cast<int>(si);
        out.rules[pack_match(static_cast<int>(si), dir, b,
                             static_cast<int>(hop_groups.size()))] = deliver;
      }
    }
  }
  return out;
}

RuleDelta diff(const RuleSet& oldset, const RuleSet& newset) {
  RuleDelta d;
  auto io = oldset.rules.begin();
  auto in = newset.rules.begin();
  while (io != oldset.rules.end() || in != newset.rules.end()) {
    if (in == newset.rules.end() ||
        (io != oldset.rules.end() && io->first < in->first)) {
      d.remove.push_back(io->first);
      ++io;
    } else if (io == oldset.rules.end() || in->first < io->first) {
      d.add.push_back(*in);
      ++in;
    } else {
      if (!(io->second == in->second)) d.add.push_back(*in);  // replacement
      ++io;
      ++in;
    }
  }
  return d;
}

void apply_delta_to(RuleSet& set, const RuleDelta& delta) {
  for (uint64_t k : delta.remove) set.rules.erase(k);
  for (const auto& [k, a] : delta.add) set.rules[k] = a;
}

int session_bucket(const FiveTuple& tuple, int buckets) {
  return static_cast<int>(tuple_hash(tuple.canonical()) %
                          static_cast<uint64_t>(buckets));
}

std::string dump_rules(const ScenarioConfig& cfg, const RuleSet& set) {
  std::vector<std::string> lines;
  for (const auto& [key, action] : set.rules) {
    FlowMatch m = unpack_match(key);
    std::string svc = m.service >= 0 && m.service < static_cast<int>(cfg.services.size())
                          ? cfg.services[m.service].id
                          : std::to_string(m.service);
    std::string act;
    switch (action.kind) {
      case Action::Kind::Forward:
        act = "forward " + node_id(cfg, action.node);
        break;
      case Action::Kind::Deliver:
        act = "deliver " + svc;
        break;
      case Action::Kind::Drop:
        act = "drop";
        break;
    }
    lines.push_back(svc + " " + direction_name(m.direction) + " " +
                    std::to_string(m.bucket) + " " + std::to_string(m.hop) +
                    " -> " + act);
  }
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace secchain
