#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "secchain/packet.hpp"

namespace secchain {

enum class GroupKind : uint8_t { FW = 0, WAF, AS, SSLVPN, IDS, AV };

inline constexpr int kGroupKindCount = 6;

const char* group_kind_name(GroupKind k);
bool parse_group_kind(const std::string& s, GroupKind* out);

// Configuration errors carry the path of the offending field so every
// validation failure is actionable.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& msg)
      : std::runtime_error(path.empty() ? msg : path + ": " + msg),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class SchemaError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ReferenceError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class RangeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class UnknownService : public ReferenceError {
 public:
  using ReferenceError::ReferenceError;
};

struct GroupSpec {
  std::string id;
  GroupKind kind = GroupKind::FW;
  int initial_active = 1;
  int max_active = 1;
  double node_capacity = 0;  // requests/second per node, uniform in the group
  int standby_count = 1;     // fixed at 1: the hot-standby design is many-to-one

  bool operator==(const GroupSpec&) const = default;
};

struct ChainSpec {
  std::string id;
  std::vector<std::string> hops;  // ordered group ids; a group appears at most once

  bool operator==(const ChainSpec&) const = default;
};

struct ServiceSpec {
  std::string id;
  std::string kind;   // free-form label (web, email, udp, ftp)
  std::string chain;  // ChainSpec id

  bool operator==(const ServiceSpec&) const = default;
};

struct TimerConfig {
  double heartbeat_interval_s = 0.2;
  int missed_heartbeats_for_failure = 3;
  std::string state_sync_mode = "per-update";
  double rule_install_latency_s = 0.4;
  // Total response budget for creating a serving node, end to end; the raw
  // provisioning delay is this minus the detect/generate/install phases.
  double node_create_latency_s = 3.0;
  double stats_report_period_s = 1.0;
  double per_hop_latency_ms = 0.25;
  double baseline_service_latency_ms = 5.0;
  double detect_phase_s = 0.4;
  double generate_phase_s = 0.2;
  double control_latency_s = 0.05;    // per message leg
  double replace_leg_latency_s = 0.1; // per leg of the replace exchange
  double sslvpn_latency_ms = 0.4;
  int64_t session_table_limit = 1000000;
  int64_t event_cap = 100000000;

  bool operator==(const TimerConfig&) const = default;
};

struct PolicyConfig {
  double overload_threshold = 0.8;
  double scalein_mean_threshold = 0.5;
  double imbalance_gap_threshold = 0.2;
  int session_buckets = 64;

  bool operator==(const PolicyConfig&) const = default;
};

struct WorkloadSpec {
  std::string service;
  int clients = 0;
  double rate_rps = 0;                  // per client; divided by rate_divisor
  std::optional<double> rate_end_rps;   // if set: linear ramp over [start, end)
  double start_s = 0;
  std::optional<double> end_s;          // defaults to run duration
  std::map<AttackTag, double> attack_mix;
  double external_fraction = 1.0;
  double rate_divisor = 1.0;

  bool operator==(const WorkloadSpec&) const = default;
};

struct FaultSpec {
  std::string target;  // node id ("fw-2", "fw-s1") or "random-active-in(fw)"
  std::string kind = "crash";
  double time_s = 0;

  bool operator==(const FaultSpec&) const = default;
};

struct ScenarioConfig {
  std::vector<GroupSpec> groups;
  std::vector<ChainSpec> chains;
  std::vector<ServiceSpec> services;
  std::vector<WorkloadSpec> workloads;
  std::vector<FaultSpec> faults;
  TimerConfig timers;
  PolicyConfig policy;
  uint64_t seed = 1;
  double duration_s = 0;

  bool operator==(const ScenarioConfig&) const = default;

  int group_index(const std::string& id) const;
  int chain_index(const std::string& id) const;
  int service_index(const std::string& id) const;
};

// Parses and fully validates a scenario document (JSON text). Throws
// SchemaError / ReferenceError / RangeError with the offending path.
ScenarioConfig parse_config_text(const std::string& json_text);

// Serializes back to a document that reparses to a structurally identical
// config (round-trip property).
std::string serialize_config(const ScenarioConfig& cfg);

// Warnings for suspicious-but-legal settings; never throws.
std::vector<std::string> validate_topology(const ScenarioConfig& cfg);

// Resolved ordered hop list for a service; throws UnknownService.
const ChainSpec& chain_for_service(const ScenarioConfig& cfg,
                                   const std::string& service_id);

// Parsed fault target: "<group>-<ordinal>", "<group>-s<ordinal>", or
// "random-active-in(<group>)".
struct FaultTarget {
  std::string group;
  int ordinal = 0;  // 0 when random
  bool standby = false;
  bool random = false;
};

bool parse_fault_target(const std::string& s, FaultTarget* out);

}  // namespace secchain
