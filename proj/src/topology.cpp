#include "secchain/topology.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "secchain/sim_time.hpp"

namespace secchain {

using nlohmann::json;

const char* group_kind_name(GroupKind k) {
  switch (k) {
    case GroupKind::FW: return "FW";
    case GroupKind::WAF: return "WAF";
    case GroupKind::AS: return "AS";
    case GroupKind::SSLVPN: return "SSLVPN";
    case GroupKind::IDS: return "IDS";
    case GroupKind::AV: return "AV";
  }
  return "FW";
}

bool parse_group_kind(const std::string& s, GroupKind* out) {
  for (int i = 0; i < kGroupKindCount; ++i) {
    auto k = static_cast<GroupKind>(i);
    if (s == group_kind_name(k)) {
      *out = k;
      return true;
    }
  }
  return false;
}

int ScenarioConfig::group_index(const std::string& id) const {
  for (size_t i = 0; i < groups.size(); ++i)
    if (groups[i].id == id) return static_cast<int>(i);
  return -1;
}

int ScenarioConfig::chain_index(const std::string& id) const {
  for (size_t i = 0; i < chains.size(); ++i)
    if (chains[i].id == id) return static_cast<int>(i);
  return -1;
}

int ScenarioConfig::service_index(const std::string& id) const {
  for (size_t i = 0; i < services.size(); ++i)
    if (services[i].id == id) return static_cast<int>(i);
  return -1;
}

namespace {

// --- typed field access with path-carrying errors ---------------------------

const json* find_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
}

void reject_unknown_fields(const json& obj, const std::string& path,
                           const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw SchemaError(path + "." + it.key(), "unknown field");
  }
}

std::string get_string(const json& obj, const std::string& path,
                       const std::string& key) {
  const json* f = find_field(obj, key);
  if (!f) throw SchemaError(path + "." + key, "missing required field");
  if (!f->is_string()) throw SchemaError(path + "." + key, "expected a string");
  return f->get<std::string>();
}

double get_number(const json& obj, const std::string& path,
                  const std::string& key, bool required, double def) {
  const json* f = find_field(obj, key);
  if (!f) {
    if (required) throw SchemaError(path + "." + key, "missing required field");
    return def;
  }
  if (!f->is_number()) throw SchemaError(path + "." + key, "expected a number");
  return f->get<double>();
}

int64_t get_integer(const json& obj, const std::string& path,
                    const std::string& key, bool required, int64_t def) {
  const json* f = find_field(obj, key);
  if (!f) {
    if (required) throw SchemaError(path + "." + key, "missing required field");
    return def;
  }
  if (!f->is_number_integer())
    throw SchemaError(path + "." + key, "expected an integer");
  return f->get<int64_t>();
}

const json& get_array(const json& obj, const std::string& path,
                      const std::string& key) {
  const json* f = find_field(obj, key);
  if (!f) throw SchemaError(path + "." + key, "missing required field");
  if (!f->is_array()) throw SchemaError(path + "." + key, "expected an array");
  return *f;
}

// --- section parsers ---------------------------------------------------------

GroupSpec parse_group(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown_fields(v, path,
                        {"id", "kind", "initial_active", "max_active",
                         "node_capacity", "standby_count"});
  GroupSpec g;
  g.id = get_string(v, path, "id");
  std::string kind = get_string(v, path, "kind");
  if (!parse_group_kind(kind, &g.kind))
    throw SchemaError(path + ".kind", "unknown group kind: " + kind);
  g.initial_active = static_cast<int>(get_integer(v, path, "initial_active", true, 0));
  g.max_active = static_cast<int>(get_integer(v, path, "max_active", true, 0));
  g.node_capacity = get_number(v, path, "node_capacity", true, 0);
  g.standby_count = static_cast<int>(get_integer(v, path, "standby_count", false, 1));
  if (g.initial_active < 1)
    throw RangeError(path + ".initial_active", "must be >= 1");
  if (g.max_active < g.initial_active)
    throw RangeError(path + ".max_active", "must be >= initial_active");
  if (!(g.node_capacity > 0))
    throw RangeError(path + ".node_capacity", "must be > 0");
  if (g.standby_count != 1)
    throw RangeError(path + ".standby_count",
                     "exactly one standby per group (many-to-one design)");
  return g;
}

ChainSpec parse_chain(const json& v, const std::string& parent) {
  require_object(v, parent);
  ChainSpec c;
  const json* idf = find_field(v, "id");
  if (!idf || !idf->is_string())
    throw SchemaError(parent + ".id", "missing or non-string chain id");
  c.id = idf->get<std::string>();
  std::string path = "chains." + c.id;
  reject_unknown_fields(v, path, {"id", "hops"});
  const json& hops = get_array(v, path, "hops");
  for (size_t i = 0; i < hops.size(); ++i) {
    if (!hops[i].is_string())
      throw SchemaError(path + ".hops[" + std::to_string(i) + "]",
                        "expected a group id string");
    c.hops.push_back(hops[i].get<std::string>());
  }
  return c;
}

ServiceSpec parse_service(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown_fields(v, path, {"id", "kind", "chain"});
  ServiceSpec s;
  s.id = get_string(v, path, "id");
  s.kind = get_string(v, path, "kind");
  s.chain = get_string(v, path, "chain");
  return s;
}

WorkloadSpec parse_workload(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown_fields(v, path,
                        {"service", "clients", "rate_rps", "rate_end_rps",
                         "start_s", "end_s", "attack_mix", "external_fraction",
                         "rate_divisor"});
  WorkloadSpec w;
  w.service = get_string(v, path, "service");
  w.clients = static_cast<int>(get_integer(v, path, "clients", true, 0));
  w.rate_rps = get_number(v, path, "rate_rps", true, 0);
  if (find_field(v, "rate_end_rps"))
    w.rate_end_rps = get_number(v, path, "rate_end_rps", false, 0);
  w.start_s = get_number(v, path, "start_s", false, 0);
  if (find_field(v, "end_s")) w.end_s = get_number(v, path, "end_s", false, 0);
  w.external_fraction = get_number(v, path, "external_fraction", false, 1.0);
  w.rate_divisor = get_number(v, path, "rate_divisor", false, 1.0);
  if (const json* mix = find_field(v, "attack_mix")) {
    require_object(*mix, path + ".attack_mix");
    for (auto it = mix->begin(); it != mix->end(); ++it) {
      AttackTag tag;
      if (!parse_attack_tag(it.key(), &tag) || tag == AttackTag::NONE)
        throw SchemaError(path + ".attack_mix." + it.key(), "unknown attack tag");
      if (!it.value().is_number())
        throw SchemaError(path + ".attack_mix." + it.key(), "expected a number");
      w.attack_mix[tag] = it.value().get<double>();
    }
  }
  if (w.clients < 0) throw RangeError(path + ".clients", "must be >= 0");
  if (w.clients > 0 && !(w.rate_rps > 0))
    throw RangeError(path + ".rate_rps", "must be > 0");
  if (!(w.rate_divisor > 0))
    throw RangeError(path + ".rate_divisor", "must be > 0");
  if (w.external_fraction < 0 || w.external_fraction > 1)
    throw RangeError(path + ".external_fraction", "must be within [0, 1]");
  double mix_sum = 0;
  for (auto& [tag, frac] : w.attack_mix) {
    if (frac < 0 || frac > 1)
      throw RangeError(path + ".attack_mix." + attack_tag_name(tag),
                       "fractions must be within [0, 1]");
    mix_sum += frac;
  }
  if (mix_sum > 1.0 + 1e-12)
    throw RangeError(path + ".attack_mix", "fractions sum to more than 1");
  if (w.rate_end_rps && !(*w.rate_end_rps > 0))
    throw RangeError(path + ".rate_end_rps", "must be > 0");
  if (w.start_s < 0) throw RangeError(path + ".start_s", "must be >= 0");
  return w;
}

FaultSpec parse_fault(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown_fields(v, path, {"target", "kind", "time_s"});
  FaultSpec f;
  f.target = get_string(v, path, "target");
  f.kind = find_field(v, "kind") ? get_string(v, path, "kind") : "crash";
  f.time_s = get_number(v, path, "time_s", true, 0);
  if (f.kind != "crash")
    throw SchemaError(path + ".kind", "unsupported fault kind: " + f.kind);
  return f;
}

TimerConfig parse_timers(const json& v) {
  const std::string path = "timers";
  require_object(v, path);
  reject_unknown_fields(
      v, path,
      {"heartbeat_interval_s", "missed_heartbeats_for_failure",
       "state_sync_mode", "rule_install_latency_s", "node_create_latency_s",
       "stats_report_period_s", "per_hop_latency_ms",
       "baseline_service_latency_ms", "detect_phase_s", "generate_phase_s",
       "control_latency_s", "replace_leg_latency_s", "sslvpn_latency_ms",
       "session_table_limit", "event_cap"});
  TimerConfig t;
  t.heartbeat_interval_s = get_number(v, path, "heartbeat_interval_s", false, t.heartbeat_interval_s);
  t.missed_heartbeats_for_failure = static_cast<int>(get_integer(v, path, "missed_heartbeats_for_failure", false, t.missed_heartbeats_for_failure));
  if (find_field(v, "state_sync_mode")) t.state_sync_mode = get_string(v, path, "state_sync_mode");
  t.rule_install_latency_s = get_number(v, path, "rule_install_latency_s", false, t.rule_install_latency_s);
  t.node_create_latency_s = get_number(v, path, "node_create_latency_s", false, t.node_create_latency_s);
  t.stats_report_period_s = get_number(v, path, "stats_report_period_s", false, t.stats_report_period_s);
  t.per_hop_latency_ms = get_number(v, path, "per_hop_latency_ms", false, t.per_hop_latency_ms);
  t.baseline_service_latency_ms = get_number(v, path, "baseline_service_latency_ms", false, t.baseline_service_latency_ms);
  t.detect_phase_s = get_number(v, path, "detect_phase_s", false, t.detect_phase_s);
  t.generate_phase_s = get_number(v, path, "generate_phase_s", false, t.generate_phase_s);
  t.control_latency_s = get_number(v, path, "control_latency_s", false, t.control_latency_s);
  t.replace_leg_latency_s = get_number(v, path, "replace_leg_latency_s", false, t.replace_leg_latency_s);
  t.sslvpn_latency_ms = get_number(v, path, "sslvpn_latency_ms", false, t.sslvpn_latency_ms);
  t.session_table_limit = get_integer(v, path, "session_table_limit", false, t.session_table_limit);
  t.event_cap = get_integer(v, path, "event_cap", false, t.event_cap);

  if (t.state_sync_mode != "per-update")
    throw SchemaError(path + ".state_sync_mode",
                      "unsupported mode: " + t.state_sync_mode);
  auto positive = [&](double val, const char* name) {
    if (!(val > 0)) throw RangeError(path + "." + name, "must be > 0");
  };
  positive(t.heartbeat_interval_s, "heartbeat_interval_s");
  positive(t.rule_install_latency_s, "rule_install_latency_s");
  positive(t.node_create_latency_s, "node_create_latency_s");
  positive(t.stats_report_period_s, "stats_report_period_s");
  positive(t.per_hop_latency_ms, "per_hop_latency_ms");
  positive(t.baseline_service_latency_ms, "baseline_service_latency_ms");
  positive(t.detect_phase_s, "detect_phase_s");
  positive(t.generate_phase_s, "generate_phase_s");
  positive(t.control_latency_s, "control_latency_s");
  positive(t.replace_leg_latency_s, "replace_leg_latency_s");
  positive(t.sslvpn_latency_ms, "sslvpn_latency_ms");
  if (t.missed_heartbeats_for_failure < 1)
    throw RangeError(path + ".missed_heartbeats_for_failure", "must be >= 1");
  if (t.session_table_limit < 1)
    throw RangeError(path + ".session_table_limit", "must be >= 1");
  if (t.event_cap < 1) throw RangeError(path + ".event_cap", "must be >= 1");
  return t;
}

PolicyConfig parse_policy(const json& v) {
  const std::string path = "policy";
  require_object(v, path);
  reject_unknown_fields(v, path,
                        {"overload_threshold", "scalein_mean_threshold",
                         "imbalance_gap_threshold", "session_buckets"});
  PolicyConfig p;
  p.overload_threshold = get_number(v, path, "overload_threshold", false, p.overload_threshold);
  p.scalein_mean_threshold = get_number(v, path, "scalein_mean_threshold", false, p.scalein_mean_threshold);
  p.imbalance_gap_threshold = get_number(v, path, "imbalance_gap_threshold", false, p.imbalance_gap_threshold);
  p.session_buckets = static_cast<int>(get_integer(v, path, "session_buckets", false, p.session_buckets));
  if (!(p.overload_threshold > 0))
    throw RangeError(path + ".overload_threshold", "must be > 0");
  if (p.scalein_mean_threshold < 0)
    throw RangeError(path + ".scalein_mean_threshold", "must be >= 0");
  if (p.imbalance_gap_threshold < 0)
    throw RangeError(path + ".imbalance_gap_threshold", "must be >= 0");
  if (p.session_buckets < 1 || p.session_buckets > 1048576)
    throw RangeError(path + ".session_buckets", "must be within [1, 1048576]");
  return p;
}

void cross_validate(ScenarioConfig& cfg) {
  std::set<std::string> group_ids, chain_ids, service_ids;
  for (size_t i = 0; i < cfg.groups.size(); ++i) {
    if (!group_ids.insert(cfg.groups[i].id).second)
      throw RangeError("groups[" + std::to_string(i) + "].id",
                       "duplicate group id: " + cfg.groups[i].id);
  }
  for (auto& c : cfg.chains) {
    if (!chain_ids.insert(c.id).second)
      throw RangeError("chains." + c.id, "duplicate chain id");
    std::set<std::string> seen;
    for (size_t i = 0; i < c.hops.size(); ++i) {
      std::string path = "chains." + c.id + ".hops[" + std::to_string(i) + "]";
      if (!group_ids.count(c.hops[i]))
        throw ReferenceError(path, "unknown group: " + c.hops[i]);
      if (!seen.insert(c.hops[i]).second)
        throw RangeError(path, "group repeated in chain: " + c.hops[i]);
    }
  }
  for (size_t i = 0; i < cfg.services.size(); ++i) {
    auto& s = cfg.services[i];
    std::string path = "services[" + std::to_string(i) + "]";
    if (!service_ids.insert(s.id).second)
      throw RangeError(path + ".id", "duplicate service id: " + s.id);
    if (!chain_ids.count(s.chain))
      throw ReferenceError(path + ".chain", "unknown chain: " + s.chain);
  }
  if (!(cfg.duration_s > 0)) throw RangeError("duration_s", "must be > 0");
  for (size_t i = 0; i < cfg.workloads.size(); ++i) {
    auto& w = cfg.workloads[i];
    std::string path = "workloads[" + std::to_string(i) + "]";
    if (!service_ids.count(w.service))
      throw ReferenceError(path + ".service", "unknown service: " + w.service);
    double end = w.end_s.value_or(cfg.duration_s);
    if (end > cfg.duration_s + 1e-12)
      throw RangeError(path + ".end_s", "exceeds run duration");
    if (!(end > w.start_s) && w.clients > 0)
      throw RangeError(path + ".end_s", "must be > start_s");
  }
  for (size_t i = 0; i < cfg.faults.size(); ++i) {
    auto& f = cfg.faults[i];
    std::string path = "faults[" + std::to_string(i) + "]";
    if (f.time_s < 0 || f.time_s > cfg.duration_s)
      throw RangeError(path + ".time_s", "outside run duration");
    FaultTarget t;
    if (!parse_fault_target(f.target, &t))
      throw ReferenceError(path + ".target", "unparsable target: " + f.target);
    int gi = cfg.group_index(t.group);
    if (gi < 0)
      throw ReferenceError(path + ".target", "unknown group: " + t.group);
    if (!t.random && !t.standby && t.ordinal > cfg.groups[gi].max_active)
      throw ReferenceError(path + ".target",
                           "node ordinal exceeds max_active: " + f.target);
  }
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
  require_object(doc, "$");
  reject_unknown_fields(doc, "$",
                        {"groups", "chains", "services", "workloads", "faults",
                         "timers", "policy", "seed", "duration_s"});
  ScenarioConfig cfg;
  const json& groups = get_array(doc, "$", "groups");
  for (size_t i = 0; i < groups.size(); ++i)
    cfg.groups.push_back(parse_group(groups[i], "groups[" + std::to_string(i) + "]"));
  const json& chains = get_array(doc, "$", "chains");
  for (size_t i = 0; i < chains.size(); ++i)
    cfg.chains.push_back(parse_chain(chains[i], "chains[" + std::to_string(i) + "]"));
  const json& services = get_array(doc, "$", "services");
  for (size_t i = 0; i < services.size(); ++i)
    cfg.services.push_back(parse_service(services[i], "services[" + std::to_string(i) + "]"));
  if (const json* w = find_field(doc, "workloads")) {
    if (!w->is_array()) throw SchemaError("workloads", "expected an array");
    for (size_t i = 0; i < w->size(); ++i)
      cfg.workloads.push_back(parse_workload((*w)[i], "workloads[" + std::to_string(i) + "]"));
  }
  if (const json* f = find_field(doc, "faults")) {
    if (!f->is_array()) throw SchemaError("faults", "expected an array");
    for (size_t i = 0; i < f->size(); ++i)
      cfg.faults.push_back(parse_fault((*f)[i], "faults[" + std::to_string(i) + "]"));
  }
  if (const json* t = find_field(doc, "timers")) cfg.timers = parse_timers(*t);
  if (const json* p = find_field(doc, "policy")) cfg.policy = parse_policy(*p);
  cfg.seed = get_integer(doc, "$", "seed", false, 1);
  cfg.duration_s = get_number(doc, "$", "duration_s", true, 0);
  cross_validate(cfg);
  return cfg;
}

std::string serialize_config(const ScenarioConfig& cfg) {
  nlohmann::ordered_json doc;
  doc["groups"] = nlohmann::ordered_json::array();
  for (auto& g : cfg.groups) {
    doc["groups"].push_back({{"id", g.id},
                             {"kind", group_kind_name(g.kind)},
                             {"initial_active", g.initial_active},
                             {"max_active", g.max_active},
                             {"node_capacity", g.node_capacity},
                             {"standby_count", g.standby_count}});
  }
  doc["chains"] = nlohmann::ordered_json::array();
  for (auto& c : cfg.chains)
    doc["chains"].push_back({{"id", c.id}, {"hops", c.hops}});
  doc["services"] = nlohmann::ordered_json::array();
  for (auto& s : cfg.services)
    doc["services"].push_back({{"id", s.id}, {"kind", s.kind}, {"chain", s.chain}});
  doc["workloads"] = nlohmann::ordered_json::array();
  for (auto& w : cfg.workloads) {
    nlohmann::ordered_json jw{{"service", w.service},
                              {"clients", w.clients},
                              {"rate_rps", w.rate_rps}};
    if (w.rate_end_rps) jw["rate_end_rps"] = *w.rate_end_rps;
    jw["start_s"] = w.start_s;
    if (w.end_s) jw["end_s"] = *w.end_s;
    if (!w.attack_mix.empty()) {
      nlohmann::ordered_json mix;
      for (auto& [tag, frac] : w.attack_mix) mix[attack_tag_name(tag)] = frac;
      jw["attack_mix"] = mix;
    }
    jw["external_fraction"] = w.external_fraction;
    jw["rate_divisor"] = w.rate_divisor;
    doc["workloads"].push_back(jw);
  }
  doc["faults"] = nlohmann::ordered_json::array();
  for (auto& f : cfg.faults)
    doc["faults"].push_back({{"target", f.target}, {"kind", f.kind}, {"time_s", f.time_s}});
  auto& t = cfg.timers;
  doc["timers"] = {{"heartbeat_interval_s", t.heartbeat_interval_s},
                   {"missed_heartbeats_for_failure", t.missed_heartbeats_for_failure},
                   {"state_sync_mode", t.state_sync_mode},
                   {"rule_install_latency_s", t.rule_install_latency_s},
                   {"node_create_latency_s", t.node_create_latency_s},
                   {"stats_report_period_s", t.stats_report_period_s},
                   {"per_hop_latency_ms", t.per_hop_latency_ms},
                   {"baseline_service_latency_ms", t.baseline_service_latency_ms},
                   {"detect_phase_s", t.detect_phase_s},
                   {"generate_phase_s", t.generate_phase_s},
                   {"control_latency_s", t.control_latency_s},
                   {"replace_leg_latency_s", t.replace_leg_latency_s},
                   {"sslvpn_latency_ms", t.sslvpn_latency_ms},
                   {"session_table_limit", t.session_table_limit},
                   {"event_cap", t.event_cap}};
  auto& p = cfg.policy;
  doc["policy"] = {{"overload_threshold", p.overload_threshold},
                   {"scalein_mean_threshold", p.scalein_mean_threshold},
                   {"imbalance_gap_threshold", p.imbalance_gap_threshold},
                   {"session_buckets", p.session_buckets}};
  doc["seed"] = cfg.seed;
  doc["duration_s"] = cfg.duration_s;
  return doc.dump(2) + "\n";
}

std::vector<std::string> validate_topology(const ScenarioConfig& cfg) {
  std::vector<std::string> warnings;
  std::set<std::string> used_groups;
  for (auto& s : cfg.services) {
    int ci = cfg.chain_index(s.chain);
    if (ci < 0) continue;
    const auto& chain = cfg.chains[ci];
    if (chain.hops.empty())
      warnings.push_back("service " + s.id +
                         ": empty chain, service unprotected");
    for (auto& h : chain.hops) used_groups.insert(h);
  }
  for (auto& g : cfg.groups) {
    if (g.max_active == g.initial_active)
      warnings.push_back("group " + g.id +
                         ": max_active equals initial_active, scale-out disabled");
    if (!used_groups.count(g.id))
      warnings.push_back("group " + g.id + ": not referenced by any service chain");
  }
  return warnings;
}

const ChainSpec& chain_for_service(const ScenarioConfig& cfg,
                                   const std::string& service_id) {
  int si = cfg.service_index(service_id);
  if (si < 0)
    throw UnknownService("services", "unknown service: " + service_id);
  int ci = cfg.chain_index(cfg.services[si].chain);
  if (ci < 0)
    throw UnknownService("services." + service_id + ".chain",
                         "unresolved chain: " + cfg.services[si].chain);
  return cfg.chains[ci];
}

bool parse_fault_target(const std::string& s, FaultTarget* out) {
  *out = FaultTarget{};
  const std::string rprefix = "random-active-in(";
  if (s.rfind(rprefix, 0) == 0 && s.size() > rprefix.size() && s.back() == ')') {
    out->group = s.substr(rprefix.size(), s.size() - rprefix.size() - 1);
    out->random = true;
    return !out->group.empty();
  }
  auto dash = s.rfind('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= s.size()) return false;
  out->group = s.substr(0, dash);
  std::string tail = s.substr(dash + 1);
  if (tail[0] == 's') {
    out->standby = true;
    tail = tail.substr(1);
  }
  if (tail.empty()) return false;
  for (char c : tail)
    if (c < '0' || c > '9') return false;
  out->ordinal = std::stoi(tail);
  return out->ordinal >= 1;
}

}  // namespace secchain
