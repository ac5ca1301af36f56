#include "secchain/harness.hpp"

namespace secchain {

namespace {

// Web-application firewall behind a 40-second traffic burst that doubles the
// offered load. Variants: one static node (saturates), a static pair
// (overprovisioned), and an elastic group that grows to two nodes for the
// burst and consolidates afterwards.
const char kBurst7a[] = R"json({
  "variants": [
    {
      "name": "single",
      "config": {
        "groups": [
          {"id": "waf", "kind": "WAF", "initial_active": 1, "max_active": 1,
           "node_capacity": 2400}
        ],
        "chains": [{"id": "inspect", "hops": ["waf"]}],
        "services": [{"id": "web", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "web", "clients": 30, "rate_rps": 80, "start_s": 0,
           "attack_mix": {"SQLI": 0.05, "XSS": 0.05}},
          {"service": "web", "clients": 30, "rate_rps": 80, "start_s": 50,
           "end_s": 90, "attack_mix": {"SQLI": 0.05, "XSS": 0.05}}
        ],
        "seed": 42,
        "duration_s": 120
      }
    },
    {
      "name": "pair",
      "config": {
        "groups": [
          {"id": "waf", "kind": "WAF", "initial_active": 2, "max_active": 2,
           "node_capacity": 2400}
        ],
        "chains": [{"id": "inspect", "hops": ["waf"]}],
        "services": [{"id": "web", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "web", "clients": 30, "rate_rps": 80, "start_s": 0,
           "attack_mix": {"SQLI": 0.05, "XSS": 0.05}},
          {"service": "web", "clients": 30, "rate_rps": 80, "start_s": 50,
           "end_s": 90, "attack_mix": {"SQLI": 0.05, "XSS": 0.05}}
        ],
        "policy": {"scalein_mean_threshold": 0},
        "seed": 42,
        "duration_s": 120
      }
    },
    {
      "name": "elastic",
      "config": {
        "groups": [
          {"id": "waf", "kind": "WAF", "initial_active": 1, "max_active": 2,
           "node_capacity": 2400}
        ],
        "chains": [{"id": "inspect", "hops": ["waf"]}],
        "services": [{"id": "web", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "web", "clients": 30, "rate_rps": 80, "start_s": 0,
           "attack_mix": {"SQLI": 0.05, "XSS": 0.05}},
          {"service": "web", "clients": 30, "rate_rps": 80, "start_s": 50,
           "end_s": 90, "attack_mix": {"SQLI": 0.05, "XSS": 0.05}}
        ],
        "policy": {"overload_threshold": 1.2, "scalein_mean_threshold": 0.55},
        "seed": 42,
        "duration_s": 120
      }
    }
  ]
})json";

// Firewall pair under a linear ramp-down: load falls from 1.6x to 0.2x of a
// single node's capacity. The elastic variant consolidates onto one node once
// mean utilization drops below the scale-in threshold; the static variant
// keeps both nodes and halves its per-node utilization instead.
const char kScalein7b[] = R"json({
  "variants": [
    {
      "name": "elastic",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 2, "max_active": 2,
           "node_capacity": 50000}
        ],
        "chains": [{"id": "inspect", "hops": ["fw"]}],
        "services": [{"id": "bulk", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "bulk", "clients": 100, "rate_rps": 8000000,
           "rate_end_rps": 1000000, "rate_divisor": 10000,
           "start_s": 0, "end_s": 100}
        ],
        "policy": {"overload_threshold": 1.05},
        "seed": 7,
        "duration_s": 100
      }
    },
    {
      "name": "static",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 2, "max_active": 2,
           "node_capacity": 50000}
        ],
        "chains": [{"id": "inspect", "hops": ["fw"]}],
        "services": [{"id": "bulk", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "bulk", "clients": 100, "rate_rps": 8000000,
           "rate_end_rps": 1000000, "rate_divisor": 10000,
           "start_s": 0, "end_s": 100}
        ],
        "policy": {"scalein_mean_threshold": 0},
        "seed": 7,
        "duration_s": 100
      }
    }
  ]
})json";

// One injected node crash per variant, resolved three different ways:
// survivors absorb the load (rebalance), the hot standby takes over
// (switchover), and a cold replacement is provisioned because the standby was
// already dead (create).
const char kFailure8[] = R"json({
  "variants": [
    {
      "name": "rebalance",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 3, "max_active": 3,
           "node_capacity": 1000}
        ],
        "chains": [{"id": "inspect", "hops": ["fw"]}],
        "services": [{"id": "svc", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "svc", "clients": 30, "rate_rps": 30, "start_s": 0}
        ],
        "faults": [{"target": "fw-3", "time_s": 20}],
        "policy": {"scalein_mean_threshold": 0.2},
        "seed": 8,
        "duration_s": 40
      }
    },
    {
      "name": "switchover",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 2, "max_active": 2,
           "node_capacity": 1000}
        ],
        "chains": [{"id": "inspect", "hops": ["fw"]}],
        "services": [{"id": "svc", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "svc", "clients": 28, "rate_rps": 50, "start_s": 0}
        ],
        "faults": [{"target": "fw-2", "time_s": 20}],
        "seed": 8,
        "duration_s": 40
      }
    },
    {
      "name": "create",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 2, "max_active": 3,
           "node_capacity": 1000}
        ],
        "chains": [{"id": "inspect", "hops": ["fw"]}],
        "services": [{"id": "svc", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "svc", "clients": 28, "rate_rps": 50, "start_s": 0}
        ],
        "faults": [
          {"target": "fw-s1", "time_s": 10},
          {"target": "fw-2", "time_s": 20}
        ],
        "seed": 8,
        "duration_s": 40
      }
    }
  ]
})json";

// Web service behind a firewall + WAF chain versus the same service with no
// inspection, swept across three request-rate plateaus. Nodes are sized so
// nothing saturates; the variants differ only in path length.
const char kWeb9[] = R"json({
  "variants": [
    {
      "name": "protected",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000},
          {"id": "waf", "kind": "WAF", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000}
        ],
        "chains": [
          {"id": "inspect", "hops": ["fw", "waf"]},
          {"id": "direct", "hops": []}
        ],
        "services": [{"id": "web", "kind": "web", "chain": "inspect"}],
        "workloads": [
          {"service": "web", "clients": 50, "rate_rps": 20, "start_s": 0,
           "end_s": 30},
          {"service": "web", "clients": 50, "rate_rps": 40, "start_s": 30,
           "end_s": 60},
          {"service": "web", "clients": 50, "rate_rps": 80, "start_s": 60,
           "end_s": 90}
        ],
        "seed": 9,
        "duration_s": 90
      }
    },
    {
      "name": "baseline",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000},
          {"id": "waf", "kind": "WAF", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000}
        ],
        "chains": [
          {"id": "inspect", "hops": ["fw", "waf"]},
          {"id": "direct", "hops": []}
        ],
        "services": [{"id": "web", "kind": "web", "chain": "direct"}],
        "workloads": [
          {"service": "web", "clients": 50, "rate_rps": 20, "start_s": 0,
           "end_s": 30},
          {"service": "web", "clients": 50, "rate_rps": 40, "start_s": 30,
           "end_s": 60},
          {"service": "web", "clients": 50, "rate_rps": 80, "start_s": 60,
           "end_s": 90}
        ],
        "seed": 9,
        "duration_s": 90
      }
    }
  ]
})json";

// Email service behind a firewall + anti-spam + SSL/VPN chain versus the bare
// service. The longer chain and the crypto hop raise the relative latency
// overhead above the web case; the service itself is slower (10 ms).
const char kEmail10[] = R"json({
  "variants": [
    {
      "name": "protected",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000},
          {"id": "as", "kind": "AS", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000},
          {"id": "sslvpn", "kind": "SSLVPN", "initial_active": 1,
           "max_active": 1, "node_capacity": 100000}
        ],
        "chains": [
          {"id": "inspect", "hops": ["fw", "as", "sslvpn"]},
          {"id": "direct", "hops": []}
        ],
        "services": [{"id": "email", "kind": "email", "chain": "inspect"}],
        "workloads": [
          {"service": "email", "clients": 50, "rate_rps": 20, "start_s": 0,
           "end_s": 30},
          {"service": "email", "clients": 50, "rate_rps": 40, "start_s": 30,
           "end_s": 60},
          {"service": "email", "clients": 50, "rate_rps": 80, "start_s": 60,
           "end_s": 90}
        ],
        "timers": {"baseline_service_latency_ms": 10.0},
        "seed": 10,
        "duration_s": 90
      }
    },
    {
      "name": "baseline",
      "config": {
        "groups": [
          {"id": "fw", "kind": "FW", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000},
          {"id": "as", "kind": "AS", "initial_active": 1, "max_active": 1,
           "node_capacity": 100000},
          {"id": "sslvpn", "kind": "SSLVPN", "initial_active": 1,
           "max_active": 1, "node_capacity": 100000}
        ],
        "chains": [
          {"id": "inspect", "hops": ["fw", "as", "sslvpn"]},
          {"id": "direct", "hops": []}
        ],
        "services": [{"id": "email", "kind": "email", "chain": "direct"}],
        "workloads": [
          {"service": "email", "clients": 50, "rate_rps": 20, "start_s": 0,
           "end_s": 30},
          {"service": "email", "clients": 50, "rate_rps": 40, "start_s": 30,
           "end_s": 60},
          {"service": "email", "clients": 50, "rate_rps": 80, "start_s": 60,
           "end_s": 90}
        ],
        "timers": {"baseline_service_latency_ms": 10.0},
        "seed": 10,
        "duration_s": 90
      }
    }
  ]
})json";

struct Builtin {
  const char* name;
  const char* text;
};

const Builtin kBuiltins[] = {
    {"burst7a", kBurst7a},   {"scalein7b", kScalein7b},
    {"failure8", kFailure8}, {"web9", kWeb9},
    {"email10", kEmail10},
};

}  // namespace

const char* builtin_scenario(const std::string& name) {
  for (const auto& b : kBuiltins)
    if (name == b.name) return b.text;
  return nullptr;
}

const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) out.emplace_back(b.name);
    return out;
  }();
  return names;
}

}  // namespace secchain
