#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "secchain/chain_compiler.hpp"
#include "secchain/metrics.hpp"
#include "secchain/simengine.hpp"
#include "secchain/topology.hpp"

using namespace secchain;
using nlohmann::json;

namespace {

// One FW group in front of one service; knobs for the dimensions the tests
// vary. Returns config text so tests can tweak the JSON before parsing.
json base_doc() {
  return json{
      {"seed", 1},
      {"duration_s", 11.0},
      {"groups", json::array({json{{"id", "fw"},
                                   {"kind", "FW"},
                                   {"initial_active", 1},
                                   {"max_active", 1},
                                   {"node_capacity", 100000.0}}})},
      {"chains", json::array({json{{"id", "inspect"}, {"hops", {"fw"}}}})},
      {"services",
       json::array({json{{"id", "web"}, {"kind", "web"}, {"chain", "inspect"}}})},
      {"workloads", json::array()},
  };
}

SimResult run_doc(const json& doc) {
  return run_simulation(parse_config_text(doc.dump()));
}

std::vector<double> series_values(const SimResult& r, Series s) {
  std::vector<double> out;
  for (const MetricPoint& p : r.metrics)
    if (p.series == s) out.push_back(p.value);
  return out;
}

std::optional<double> series_at(const SimResult& r, Series s, double t_s) {
  for (const MetricPoint& p : r.metrics)
    if (p.series == s && p.t == seconds_to_ticks(t_s)) return p.value;
  return std::nullopt;
}

void check_conservation(const SimCounters& c) {
  CHECK(c.injected == c.delivered + c.dropped_switch + c.dropped_overload +
                          c.dropped_detected + c.in_flight);
  CHECK(c.attacks_injected == c.attacks_detected + c.attacks_missed_overload +
                                  c.attacks_dropped_switch +
                                  c.attacks_delivered + c.attacks_in_flight);
}

bool same_result(const SimResult& a, const SimResult& b) {
  if (a.event_count != b.event_count) return false;
  if (a.rules_dump != b.rules_dump) return false;
  if (a.metrics.size() != b.metrics.size()) return false;
  for (size_t i = 0; i < a.metrics.size(); ++i) {
    const MetricPoint &x = a.metrics[i], &y = b.metrics[i];
    if (x.t != y.t || x.series != y.series || x.value != y.value) return false;
  }
  if (a.logs.size() != b.logs.size()) return false;
  for (size_t i = 0; i < a.logs.size(); ++i)
    if (render_log_line(a.logs[i]) != render_log_line(b.logs[i])) return false;
  if (a.counters.injected != b.counters.injected) return false;
  if (a.counters.delivered != b.counters.delivered) return false;
  return a.messages.size() == b.messages.size();
}

}  // namespace

TEST_CASE("idle scenario still runs its control plane") {
  json doc = base_doc();
  SimResult r = run_doc(doc);
  CHECK(r.counters.injected == 0);
  CHECK(r.counters.delivered == 0);
  CHECK(r.event_count > 0);
  CHECK(r.final_actives.at("fw") == 1);
  CHECK(r.final_standbys.at("fw") == 1);
  bool heartbeats = false;
  for (const Message& m : r.messages)
    if (m.kind == MsgKind::ReqHeartbeat) heartbeats = true;
  CHECK(heartbeats);
  check_conservation(r.counters);
}

TEST_CASE("steady workload injects at the configured aggregate rate") {
  json doc = base_doc();
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 30},
                                       {"rate_rps", 80.0},
                                       {"start_s", 0.0},
                                       {"end_s", 10.0}}});
  SimResult r = run_doc(doc);
  CHECK(r.counters.injected == 24000);  // 30 clients * 80 rps * 10 s
  CHECK(r.counters.dropped_overload == 0);
  CHECK(r.counters.dropped_switch == 0);
  // Mid-run one-second windows carry exactly the aggregate rate.
  auto tp = series_at(r, Series::throughput_rps, 5.0);
  REQUIRE(tp.has_value());
  CHECK(*tp == doctest::Approx(2400.0));
  check_conservation(r.counters);
}

TEST_CASE("attack mix counts are reproducible") {
  json doc = base_doc();
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 10},
                                       {"rate_rps", 100.0},
                                       {"start_s", 0.0},
                                       {"end_s", 10.0},
                                       {"attack_mix", json{{"SYNFLOOD", 0.1}}}}});
  SimResult r = run_doc(doc);
  CHECK(r.counters.injected == 10000);
  CHECK(r.counters.attacks_injected == 1001);
  // FW detects SYNFLOOD and capacity is ample: every attack is caught.
  CHECK(r.counters.attacks_detected == 1001);
  CHECK(r.counters.attacks_missed_overload == 0);
  CHECK(r.counters.dropped_detected == 1001);
  // Detection-rate samples stay pinned at 1 while attacks flow.
  for (double v : series_values(r, Series::detection_rate))
    CHECK(v == doctest::Approx(1.0));
  check_conservation(r.counters);
}

TEST_CASE("ramped workload thins linearly") {
  json doc = base_doc();
  doc["duration_s"] = 100.0;
  doc["groups"][0]["initial_active"] = 2;
  doc["groups"][0]["max_active"] = 2;
  doc["policy"] = json{{"scalein_mean_threshold", 0.0}};  // hold at 2 actives
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 100},
                                       {"rate_rps", 8.0e6},
                                       {"rate_end_rps", 1.0e6},
                                       {"rate_divisor", 1.0e4},
                                       {"start_s", 0.0},
                                       {"end_s", 100.0}}});
  SimResult r = run_doc(doc);
  auto early = series_at(r, Series::throughput_rps, 1.0);
  auto mid = series_at(r, Series::throughput_rps, 51.0);
  REQUIRE(early.has_value());
  REQUIRE(mid.has_value());
  // Linear decay 800 -> 100 rps/client: the t=50 window carries 9/16 of the
  // t=0 window's load.
  CHECK(*mid / *early == doctest::Approx(9.0 / 16.0).epsilon(0.02));
  check_conservation(r.counters);
}

TEST_CASE("every control request is answered on the round-trip schedule") {
  json doc = base_doc();
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 5},
                                       {"rate_rps", 10.0},
                                       {"start_s", 0.0},
                                       {"end_s", 10.0}}});
  SimResult r = run_doc(doc);
  const Tick leg = seconds_to_ticks(0.05);
  const Tick end = seconds_to_ticks(11.0);
  int queries = 0;
  for (const Message& m : r.messages) {
    if (m.kind != MsgKind::ReqQuery || m.dropped) continue;
    // A response to a request sent at the very end would land past the run.
    if (m.deliver_time + leg > end) continue;
    ++queries;
    CHECK(m.deliver_time - m.send_time == leg);
    bool answered = false;
    for (const Message& res : r.messages) {
      if (res.kind == MsgKind::ResQuery && res.sender == m.receiver &&
          res.receiver == m.sender && res.send_time == m.deliver_time) {
        CHECK(res.deliver_time - res.send_time == leg);
        answered = true;
        break;
      }
    }
    CHECK(answered);
  }
  CHECK(queries > 0);
}

TEST_CASE("crash fault walks the detect/replace/install schedule") {
  json doc = base_doc();
  doc["duration_s"] = 40.0;
  doc["groups"][0]["initial_active"] = 2;
  doc["groups"][0]["max_active"] = 2;
  doc["groups"][0]["node_capacity"] = 1000.0;
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 28},
                                       {"rate_rps", 50.0},
                                       {"start_s", 0.0}}});
  doc["faults"] = json::array({json{{"target", "fw-2"}, {"time_s", 20.0}}});
  SimResult r = run_doc(doc);

  REQUIRE(r.switchovers.size() == 1);
  const SwitchoverRecord& s = r.switchovers[0];
  CHECK(s.failed == "fw-2");
  CHECK(s.t_failure == seconds_to_ticks(20.0));
  CHECK(s.t_detect == seconds_to_ticks(20.6));
  CHECK(s.t_rules_installed == seconds_to_ticks(21.2));
  CHECK(s.total_s() == doctest::Approx(1.2));

  REQUIRE(r.failure_audits.size() == 1);
  CHECK(r.failure_audits[0].resolution == "switchover");
  CHECK(r.failure_audits[0].sessions_lost == 0);
  // Promoted standby serves the exact session set the dead node held.
  CHECK(r.failure_audits[0].post_switchover_keys ==
        r.failure_audits[0].pre_failure_keys);

  bool saw_response = false;
  for (const ResponseRecord& resp : r.responses)
    if (resp.kind == "switchover") {
      saw_response = true;
      CHECK(resp.elapsed_s == doctest::Approx(1.2));
    }
  CHECK(saw_response);

  // Messages addressed to the dead node are dropped and logged.
  bool dropped_msg = false, drop_log = false;
  for (const Message& m : r.messages)
    if (m.dropped) dropped_msg = true;
  for (const LogRecord& lr : r.logs)
    if (lr.kind == LogKind::Protocol &&
        lr.payload.rfind("dropped=", 0) == 0)
      drop_log = true;
  CHECK(dropped_msg);
  CHECK(drop_log);
  check_conservation(r.counters);
}

TEST_CASE("conservation holds exactly on a lossy run") {
  json doc = base_doc();
  doc["duration_s"] = 40.0;
  doc["groups"][0]["node_capacity"] = 1000.0;  // offered 2400 vs capacity 1000
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 30},
                                       {"rate_rps", 80.0},
                                       {"start_s", 0.0},
                                       {"attack_mix", json{{"DDOS", 0.2}}}}});
  doc["faults"] = json::array({json{{"target", "fw-1"}, {"time_s", 20.0}}});
  SimResult r = run_doc(doc);
  CHECK(r.counters.dropped_overload > 0);
  CHECK(r.counters.attacks_missed_overload > 0);
  CHECK(r.counters.injected > 0);
  check_conservation(r.counters);
}

TEST_CASE("two runs of one config produce identical outputs") {
  json doc = base_doc();
  doc["duration_s"] = 30.0;
  doc["groups"][0]["max_active"] = 3;
  doc["groups"][0]["node_capacity"] = 2000.0;
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 30},
                                       {"rate_rps", 80.0},
                                       {"start_s", 0.0},
                                       {"attack_mix", json{{"SYNFLOOD", 0.05}}}}});
  ScenarioConfig cfg = parse_config_text(doc.dump());
  SimResult a = run_simulation(cfg);
  SimResult b = run_simulation(cfg);
  CHECK(same_result(a, b));
}

TEST_CASE("concurrent runs do not perturb each other") {
  json doc = base_doc();
  doc["duration_s"] = 15.0;
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 10},
                                       {"rate_rps", 50.0},
                                       {"start_s", 0.0},
                                       {"attack_mix", json{{"SYNFLOOD", 0.1}}}}});
  json doc2 = doc;
  doc2["seed"] = 99;
  ScenarioConfig cfg1 = parse_config_text(doc.dump());
  ScenarioConfig cfg2 = parse_config_text(doc2.dump());
  SimResult serial1 = run_simulation(cfg1);
  SimResult serial2 = run_simulation(cfg2);
  SimResult par1, par2;
  std::thread t1([&] { par1 = run_simulation(cfg1); });
  std::thread t2([&] { par2 = run_simulation(cfg2); });
  t1.join();
  t2.join();
  CHECK(same_result(serial1, par1));
  CHECK(same_result(serial2, par2));
  CHECK_FALSE(same_result(serial1, serial2));  // seeds actually differ
}

TEST_CASE("event cap aborts a runaway simulation") {
  json doc = base_doc();
  doc["timers"] = json{{"event_cap", 10}};
  CHECK_THROWS_AS(run_doc(doc), SimAbort);
}

TEST_CASE("empty chain delivers at switch latency plus service baseline") {
  json doc = base_doc();
  doc["chains"] = json::array({json{{"id", "none"}, {"hops", json::array()}}});
  doc["services"] =
      json::array({json{{"id", "web"}, {"kind", "web"}, {"chain", "none"}}});
  doc["workloads"] = json::array({json{{"service", "web"},
                                       {"clients", 10},
                                       {"rate_rps", 20.0},
                                       {"start_s", 0.0},
                                       {"end_s", 10.0}}});
  SimResult r = run_doc(doc);
  CHECK(r.counters.delivered == r.counters.injected);
  std::vector<double> lat = series_values(r, Series::latency_ms);
  REQUIRE_FALSE(lat.empty());
  for (double v : lat) CHECK(v == doctest::Approx(5.25));
  check_conservation(r.counters);
}

TEST_CASE("standby ratio reflects groups over alive actives") {
  json doc = base_doc();
  doc["groups"][0]["initial_active"] = 3;
  doc["groups"][0]["max_active"] = 3;
  // No traffic: disable scale-in so the group stays at full strength.
  doc["policy"] = json{{"scalein_mean_threshold", 0.0}};
  SimResult r = run_doc(doc);
  std::vector<double> ratios = series_values(r, Series::standby_ratio);
  REQUIRE_FALSE(ratios.empty());
  for (double v : ratios) CHECK(v == doctest::Approx(1.0 / 3.0));

  json two = base_doc();
  two["policy"] = json{{"scalein_mean_threshold", 0.0}};
  two["groups"].push_back(json{{"id", "waf"},
                               {"kind", "WAF"},
                               {"initial_active", 2},
                               {"max_active", 2},
                               {"node_capacity", 100000.0}});
  two["groups"][0]["initial_active"] = 2;
  two["groups"][0]["max_active"] = 2;
  two["chains"] = json::array({json{{"id", "inspect"}, {"hops", {"fw", "waf"}}}});
  SimResult r2 = run_doc(two);
  std::vector<double> ratios2 = series_values(r2, Series::standby_ratio);
  REQUIRE_FALSE(ratios2.empty());
  for (double v : ratios2) CHECK(v == doctest::Approx(0.5));
}

TEST_CASE("client tuples land in their designated session buckets") {
  const int B = 16;
  std::vector<FiveTuple> tuples;
  for (int k = 0; k < 64; ++k) {
    FiveTuple t = synth_client_tuple(k, 0, B);
    CHECK(session_bucket(t, B) == k % B);
    tuples.push_back(t);
  }
  // All distinct as canonical keys.
  std::vector<std::string> keys;
  for (const FiveTuple& t : tuples) keys.push_back(t.canonical().to_string());
  std::sort(keys.begin(), keys.end());
  CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
  // Different services get different endpoints.
  CHECK(synth_client_tuple(0, 1, B).canonical().to_string() !=
        synth_client_tuple(0, 0, B).canonical().to_string());
}

TEST_CASE("deterministic random primitives match their fixed points") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(1) == 0x910a2dec89025cc1ULL);
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10000; ++i) {
    double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  std::mt19937_64 a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(uniform01(a) == uniform01(b));
}
