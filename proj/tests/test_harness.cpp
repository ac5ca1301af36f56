#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "secchain/harness.hpp"

using namespace secchain;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = "harness_test_tmp";

struct TmpDir {
  TmpDir() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("secchain");
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

// Tiny single-document scenario used where built-ins would be overkill.
const char* kTinyDoc = R"({
  "seed": 3,
  "duration_s": 10,
  "groups": [{"id": "fw", "kind": "FW", "initial_active": 1,
              "max_active": 2, "node_capacity": 100000}],
  "chains": [{"id": "inspect", "hops": ["fw"]}],
  "services": [{"id": "web", "kind": "web", "chain": "inspect"}],
  "workloads": [{"service": "web", "clients": 4, "rate_rps": 25,
                 "start_s": 0, "end_s": 6,
                 "attack_mix": {"SQLI": 0.25}}],
  "faults": [{"target": "fw-1", "time_s": 4.0}]
})";

ScenarioResult tiny_result(const RunOptions& opts = {}) {
  static TmpDir cleanup;
  fs::path p = kTmp / "tiny.json";
  spit(p, kTinyDoc);
  return run_scenario(p.string(), opts);
}

}  // namespace

TEST_CASE("metrics csv renders one row per point with exact columns") {
  ScenarioResult r;
  r.name = "demo";
  r.multi = false;
  VariantResult v;
  v.sim.metrics.push_back({seconds_to_ticks(1.0), Series::utilization, 0.25});
  v.sim.metrics.push_back(
      {seconds_to_ticks(2.5), Series::throughput_rps, 2400.0});
  r.variants.push_back(std::move(v));
  CHECK(render_metrics_csv(r) ==
        "time_s,scenario,series,value\n"
        "1,demo,utilization,0.25\n"
        "2.5,demo,throughput_rps,2400\n");
}

TEST_CASE("multi-variant rows carry scenario/variant labels") {
  ScenarioResult r;
  r.name = "demo";
  r.multi = true;
  VariantResult a, b;
  a.variant = "fast";
  a.sim.metrics.push_back({seconds_to_ticks(1.0), Series::latency_ms, 5.25});
  a.sim.logs.push_back(
      {seconds_to_ticks(1.0), Severity::Info, "controller", LogKind::Decision,
       "noop"});
  b.variant = "slow";
  b.sim.metrics.push_back({seconds_to_ticks(1.0), Series::latency_ms, 11.4});
  r.variants.push_back(std::move(a));
  r.variants.push_back(std::move(b));
  CHECK(render_metrics_csv(r) ==
        "time_s,scenario,series,value\n"
        "1,demo/fast,latency_ms,5.25\n"
        "1,demo/slow,latency_ms,11.4\n");
  CHECK(render_logs_tsv(r) == "1\tinfo\tfast/controller\tdecision\tnoop\n");
}

TEST_CASE("summary stats agree with an independent pass over the metrics") {
  ScenarioResult res = run_scenario("failure8", {});
  std::string text = render_summary_json(res);
  nlohmann::json doc = nlohmann::json::parse(text);

  REQUIRE(doc.at("variants").size() == res.variants.size());
  for (size_t i = 0; i < res.variants.size(); ++i) {
    const VariantResult& v = res.variants[i];
    const nlohmann::json& jv = doc.at("variants").at(i);
    CHECK(jv.at("variant").get<std::string>() == v.variant);
    // Recompute utilization stats naively.
    int count = 0;
    double mn = 0, mx = 0, sum = 0, fin = 0;
    for (const MetricPoint& p : v.sim.metrics) {
      if (p.series != Series::utilization) continue;
      if (count == 0) {
        mn = mx = p.value;
      } else {
        mn = std::min(mn, p.value);
        mx = std::max(mx, p.value);
      }
      ++count;
      sum += p.value;
      fin = p.value;
    }
    REQUIRE(count > 0);
    const nlohmann::json& st = jv.at("series").at("utilization");
    CHECK(st.at("count").get<int>() == count);
    CHECK(st.at("min").get<double>() == doctest::Approx(mn));
    CHECK(st.at("max").get<double>() == doctest::Approx(mx));
    CHECK(st.at("final").get<double>() == doctest::Approx(fin));
    CHECK(st.at("mean").get<double>() == doctest::Approx(sum / count));
    // Counters mirror the sim result exactly.
    CHECK(jv.at("counters").at("injected").get<int64_t>() ==
          v.sim.counters.injected);
    CHECK(jv.at("counters").at("delivered").get<int64_t>() ==
          v.sim.counters.delivered);
  }
}

TEST_CASE("log queries filter conjunctively") {
  ScenarioResult res = tiny_result();
  fs::path logp = kTmp / "query.tsv";
  spit(logp, render_logs_tsv(res));

  std::string all = query_log_file(logp.string(), LogFilter{});
  CHECK(std::count(all.begin(), all.end(), '\n') ==
        static_cast<long>(res.variants[0].sim.logs.size()));

  LogFilter sev;
  sev.severity = Severity::Critical;
  std::string crit = query_log_file(logp.string(), sev);
  std::istringstream lines(crit);
  std::string line;
  while (std::getline(lines, line))
    CHECK(line.find("\tcritical\t") != std::string::npos);

  LogFilter window;
  window.from_s = 1e7;  // past the end of the run
  CHECK(query_log_file(logp.string(), window).empty());

  LogFilter kindf;
  kindf.kind = LogKind::Decision;
  kindf.source = "controller";
  std::string decisions = query_log_file(logp.string(), kindf);
  CHECK_FALSE(decisions.empty());

  spit(kTmp / "bad.tsv", "this is not a log line\n");
  CHECK_THROWS_AS(query_log_file((kTmp / "bad.tsv").string(), LogFilter{}),
                  ConfigError);
  CHECK_THROWS_AS(query_log_file((kTmp / "missing.tsv").string(), LogFilter{}),
                  ConfigError);
}

TEST_CASE("comparing a run against itself reports zero overhead") {
  ScenarioResult res = tiny_result();
  CompareRow row = compare_variants(res.variants[0], res.variants[0]);
  CHECK(row.latency_overhead_pct == doctest::Approx(0.0));
  CHECK(row.throughput_overhead_pct == doctest::Approx(0.0));
}

TEST_CASE("inspection overhead shows up in the protected/baseline pair") {
  ScenarioResult res = run_scenario("web9", {});
  REQUIRE(res.variants.size() == 2);
  const VariantResult& prot = res.variants[0];
  const VariantResult& base = res.variants[1];
  REQUIRE(prot.variant == "protected");
  REQUIRE(base.variant == "baseline");
  CompareRow row = compare_variants(prot, base);
  CHECK(row.latency_run > row.latency_baseline);
  CHECK(row.latency_overhead_pct == doctest::Approx(9.5238).epsilon(0.01));
}

TEST_CASE("compare refuses mismatched seeds or workloads") {
  ScenarioResult a = tiny_result();
  RunOptions seed_opts;
  seed_opts.seed = 4;
  ScenarioResult b = tiny_result(seed_opts);
  CHECK_THROWS_AS(compare_variants(a.variants[0], b.variants[0]), ConfigError);

  RunOptions wl_opts;
  wl_opts.overrides = {"workloads.0.clients=5"};
  ScenarioResult c = tiny_result(wl_opts);
  CHECK_THROWS_AS(compare_variants(a.variants[0], c.variants[0]), ConfigError);
}

TEST_CASE("run options override the document") {
  RunOptions opts;
  opts.seed = 9;
  opts.duration_s = 7.0;  // still covers the workload window [0, 6)
  opts.overrides = {"seed=5", "policy.session_buckets=32",
                    "groups.fw.node_capacity=1234"};
  ScenarioResult res = tiny_result(opts);
  const ScenarioConfig& cfg = res.variants[0].cfg;
  CHECK(cfg.seed == 9);  // --seed wins over --set seed=5
  CHECK(cfg.duration_s == doctest::Approx(7.0));
  CHECK(cfg.policy.session_buckets == 32);
  CHECK(cfg.groups[0].node_capacity == doctest::Approx(1234));

  // Overrides hit every variant of a multi-document scenario.
  RunOptions multi;
  multi.overrides = {"policy.session_buckets=8"};
  ScenarioResult f8 = run_scenario("failure8", multi);
  for (const VariantResult& v : f8.variants)
    CHECK(v.cfg.policy.session_buckets == 8);
}

TEST_CASE("workload hash tracks workload-shaping fields only") {
  ScenarioResult a = tiny_result();
  ScenarioResult b = tiny_result();
  CHECK(a.variants[0].workload_hash == b.variants[0].workload_hash);

  RunOptions seed_opts;
  seed_opts.seed = 4;
  CHECK(tiny_result(seed_opts).variants[0].workload_hash !=
        a.variants[0].workload_hash);

  RunOptions dur_opts;
  dur_opts.duration_s = 6.5;
  CHECK(tiny_result(dur_opts).variants[0].workload_hash !=
        a.variants[0].workload_hash);

  RunOptions policy_opts;
  policy_opts.overrides = {"policy.session_buckets=16"};
  CHECK(tiny_result(policy_opts).variants[0].workload_hash ==
        a.variants[0].workload_hash);
}

TEST_CASE("output layout differs for single and multi documents") {
  ScenarioResult single = tiny_result();
  fs::path sd = kTmp / "out_single";
  write_outputs(single, sd.string());
  CHECK(fs::exists(sd / "metrics.csv"));
  CHECK(fs::exists(sd / "log.tsv"));
  CHECK(fs::exists(sd / "summary.json"));
  CHECK(fs::exists(sd / "config.json"));
  CHECK(fs::exists(sd / "rules.txt"));

  ScenarioResult multi = run_scenario("failure8", {});
  fs::path md = kTmp / "out_multi";
  write_outputs(multi, md.string());
  CHECK(fs::exists(md / "metrics.csv"));
  CHECK(fs::exists(md / "summary.json"));
  for (const VariantResult& v : multi.variants) {
    fs::path vd = md / "variants" / v.variant;
    CHECK(fs::exists(vd / "config.json"));
    CHECK(fs::exists(vd / "metrics.csv"));
    CHECK(fs::exists(vd / "log.tsv"));
    CHECK(fs::exists(vd / "summary.json"));
    CHECK(fs::exists(vd / "rules.txt"));
  }
  // Round-trip: the per-variant config re-parses to an equivalent document.
  ScenarioConfig cfg = parse_config_text(
      slurp(md / "variants" / multi.variants[0].variant / "config.json"));
  CHECK(cfg.seed == multi.variants[0].cfg.seed);

  // The combined CSV carries scenario/variant labels.
  std::string csv = slurp(md / "metrics.csv");
  CHECK(csv.rfind("time_s,scenario,series,value\n", 0) == 0);
  CHECK(csv.find("failure8/switchover") != std::string::npos);
}

TEST_CASE("cli maps outcomes to exit codes") {
  tiny_result();  // ensure tmp dir + tiny.json exist

  std::string out, err;
  CHECK(run_cli({"run", "nosuch-scenario"}, &out, &err) == 2);
  CHECK(err.find("config error") != std::string::npos);
  CHECK(err.find("burst7a") != std::string::npos);  // lists the built-ins

  fs::path od = kTmp / "cli_out";
  CHECK(run_cli({"run", (kTmp / "tiny.json").string(), "--out", od.string()},
                &out, &err) == 0);
  CHECK(out.find("scenario=tiny") != std::string::npos);
  CHECK(fs::exists(od / "metrics.csv"));

  CHECK(run_cli({"logs", (od / "log.tsv").string(), "--severity", "info"},
                &out, &err) == 0);
  CHECK_FALSE(out.empty());
  CHECK(run_cli({"logs", (kTmp / "absent.tsv").string()}, &out, &err) == 2);
  CHECK(run_cli({"logs", (od / "log.tsv").string(), "--severity", "loud"},
                &out, &err) == 2);

  CHECK(run_cli({"run", (kTmp / "tiny.json").string(), "--seed", "abc"}, &out,
                &err) == 2);
  CHECK(run_cli({"run", (kTmp / "tiny.json").string(), "--set",
                 "groups.nosuch.node_capacity=1"},
                &out, &err) == 2);
  CHECK(run_cli({"run", (kTmp / "tiny.json").string(), "--set",
                 "policy.session_buckets=0"},
                &out, &err) == 2);
  CHECK(run_cli({"run", (kTmp / "tiny.json").string(), "--set", "no-equals"},
                &out, &err) == 2);

  // Simulation aborts surface as exit 3.
  nlohmann::json doc = nlohmann::json::parse(kTinyDoc);
  doc["timers"] = {{"event_cap", 10}};
  spit(kTmp / "cap.json", doc.dump());
  CHECK(run_cli({"run", (kTmp / "cap.json").string(), "--out",
                 (kTmp / "cap_out").string()},
                &out, &err) == 3);
  CHECK(err.find("simulation aborted") != std::string::npos);

  // Compare a run directory against itself: zero overhead, exit 0.
  CHECK(run_cli({"compare", od.string(), od.string()}, &out, &err) == 0);
  CHECK(out.find("latency_overhead_pct=0") != std::string::npos);

  // Mismatched seeds refuse to compare.
  fs::path od2 = kTmp / "cli_out2";
  CHECK(run_cli({"run", (kTmp / "tiny.json").string(), "--seed", "4", "--out",
                 od2.string()},
                &out, &err) == 0);
  CHECK(run_cli({"compare", od.string(), od2.string()}, &out, &err) == 2);
}

TEST_CASE("built-in scenario catalogue") {
  const std::vector<std::string>& names = builtin_scenario_names();
  CHECK(names.size() == 5);
  for (const std::string& n : names) {
    const char* text = builtin_scenario(n);
    REQUIRE(text != nullptr);
    CHECK(nlohmann::json::parse(text).is_object());
  }
  CHECK(builtin_scenario("nope") == nullptr);
}
