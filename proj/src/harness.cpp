#include "secchain/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace secchain {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("", "cannot write file: " + path.string());
  out << text;
}

uint64_t fnv1a64(uint64_t h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --set key=value: dotted path into the raw JSON document. Object segments
// may create new keys (the strict config parser still rejects unknown ones);
// array segments address elements by integer index or by their "id" field.
void apply_override(ordered_json& doc, const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("", "--set expects key=value, got: " + kv);
  std::string path = kv.substr(0, eq);
  std::string value_text = kv.substr(eq + 1);

  std::vector<std::string> segs;
  size_t pos = 0;
  while (pos <= path.size()) {
    size_t dot = path.find('.', pos);
    if (dot == std::string::npos) dot = path.size();
    if (dot == pos) throw ConfigError(path, "empty path segment in --set");
    segs.push_back(path.substr(pos, dot - pos));
    pos = dot + 1;
  }

  ordered_json* cur = &doc;
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    const std::string& seg = segs[i];
    if (cur->is_array()) {
      ordered_json* next = nullptr;
      bool numeric = !seg.empty() &&
                     std::all_of(seg.begin(), seg.end(),
                                 [](char c) { return c >= '0' && c <= '9'; });
      if (numeric) {
        size_t idx = std::stoul(seg);
        if (idx >= cur->size())
          throw ConfigError(path, "array index out of range in --set");
        next = &(*cur)[idx];
      } else {
        for (auto& el : *cur) {
          if (el.is_object() && el.contains("id") && el["id"] == seg) {
            next = &el;
            break;
          }
        }
        if (!next)
          throw ConfigError(path, "no array element with id '" + seg + "'");
      }
      cur = next;
    } else if (cur->is_object()) {
      cur = &(*cur)[seg];  // creates null for missing keys
      if (cur->is_null()) *cur = ordered_json::object();
    } else {
      throw ConfigError(path, "cannot descend into non-container in --set");
    }
  }

  ordered_json value;
  try {
    value = ordered_json::parse(value_text);
  } catch (const json::exception&) {
    value = value_text;  // bare words are strings
  }
  const std::string& leaf = segs.back();
  if (cur->is_array()) {
    bool numeric = !leaf.empty() &&
                   std::all_of(leaf.begin(), leaf.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
    if (!numeric) throw ConfigError(path, "array leaf needs a numeric index");
    size_t idx = std::stoul(leaf);
    if (idx >= cur->size())
      throw ConfigError(path, "array index out of range in --set");
    (*cur)[idx] = value;
  } else if (cur->is_object()) {
    (*cur)[leaf] = value;
  } else {
    throw ConfigError(path, "cannot assign into non-container in --set");
  }
}

struct RawVariant {
  std::string name;
  ordered_json config;
};

std::string scenario_label(const std::string& name_or_path, bool from_file) {
  if (!from_file) return name_or_path;
  return std::filesystem::path(name_or_path).stem().string();
}

double series_sum(const std::vector<MetricPoint>& pts, Series s, int64_t* n) {
  double sum = 0;
  int64_t count = 0;
  for (const auto& p : pts)
    if (p.series == s) {
      sum += p.value;
      ++count;
    }
  if (n) *n = count;
  return sum;
}

}  // namespace

uint64_t workload_hash(const ScenarioConfig& cfg) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto add = [&](const std::string& s) { h = fnv1a64(fnv1a64(h, s), "|"); };
  add(std::to_string(cfg.seed));
  add(format_double(cfg.duration_s));
  for (const auto& w : cfg.workloads) {
    add(w.service);
    add(std::to_string(w.clients));
    add(format_double(w.rate_rps));
    add(w.rate_end_rps ? format_double(*w.rate_end_rps) : "-");
    add(format_double(w.start_s));
    add(w.end_s ? format_double(*w.end_s) : "-");
    for (const auto& [tag, frac] : w.attack_mix) {
      add(attack_tag_name(tag));
      add(format_double(frac));
    }
    add(format_double(w.external_fraction));
    add(format_double(w.rate_divisor));
  }
  return h;
}

ScenarioResult run_scenario(const std::string& name_or_path,
                            const RunOptions& opts) {
  std::string text;
  bool from_file = false;
  if (const char* builtin = builtin_scenario(name_or_path)) {
    text = builtin;
  } else if (std::filesystem::exists(name_or_path)) {
    text = read_text_file(name_or_path);
    from_file = true;
  } else {
    std::string names;
    for (const auto& n : builtin_scenario_names())
      names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("", "unknown scenario '" + name_or_path +
                              "' (not a built-in or readable file; built-ins: " +
                              names + ")");
  }

  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }

  ScenarioResult result;
  result.name = scenario_label(name_or_path, from_file);

  std::vector<RawVariant> raw;
  if (doc.is_object() && doc.contains("variants")) {
    const auto& vs = doc["variants"];
    if (!vs.is_array() || vs.empty())
      throw SchemaError("variants", "must be a non-empty array");
    for (size_t i = 0; i < vs.size(); ++i) {
      const auto& v = vs[i];
      std::string at = "variants[" + std::to_string(i) + "]";
      if (!v.is_object() || !v.contains("name") || !v["name"].is_string())
        throw SchemaError(at, "variant needs a string 'name'");
      if (!v.contains("config") || !v["config"].is_object())
        throw SchemaError(at, "variant needs an object 'config'");
      raw.push_back({v["name"].get<std::string>(), v["config"]});
    }
    result.multi = true;
  } else {
    raw.push_back({"", doc});
  }

  for (auto& rv : raw) {
    ordered_json vdoc = rv.config;
    for (const auto& kv : opts.overrides) apply_override(vdoc, kv);
    if (opts.seed) vdoc["seed"] = *opts.seed;
    if (opts.duration_s) vdoc["duration_s"] = *opts.duration_s;

    VariantResult vr;
    vr.variant = rv.name;
    vr.cfg = parse_config_text(vdoc.dump());
    vr.workload_hash = workload_hash(vr.cfg);
    vr.sim = run_simulation(vr.cfg);
    result.variants.push_back(std::move(vr));
  }
  return result;
}

std::string render_metrics_csv(const ScenarioResult& r) {
  std::string out = "time_s,scenario,series,value\n";
  for (const auto& v : r.variants) {
    std::string label = r.multi ? r.name + "/" + v.variant : r.name;
    for (const auto& p : v.sim.metrics) {
      out += format_time_s(p.t);
      out += ',';
      out += label;
      out += ',';
      out += series_name(p.series);
      out += ',';
      out += format_double(p.value);
      out += '\n';
    }
  }
  return out;
}

std::string render_logs_tsv(const ScenarioResult& r) {
  std::string out;
  for (const auto& v : r.variants) {
    for (const auto& rec : v.sim.logs) {
      if (r.multi) {
        LogRecord prefixed = rec;
        prefixed.source = v.variant + "/" + rec.source;
        out += render_log_line(prefixed);
      } else {
        out += render_log_line(rec);
      }
      out += '\n';
    }
  }
  return out;
}

std::string render_summary_json(const ScenarioResult& r) {
  ordered_json root;
  root["scenario"] = r.name;
  root["multi"] = r.multi;
  root["variants"] = ordered_json::array();
  for (const auto& v : r.variants) {
    ordered_json jv;
    jv["variant"] = v.variant;
    jv["seed"] = v.cfg.seed;
    jv["duration_s"] = v.cfg.duration_s;
    jv["workload_hash"] = hash_hex(v.workload_hash);
    jv["event_count"] = v.sim.event_count;

    const SimCounters& c = v.sim.counters;
    ordered_json jc;
    jc["injected"] = c.injected;
    jc["delivered"] = c.delivered;
    jc["dropped_switch"] = c.dropped_switch;
    jc["dropped_overload"] = c.dropped_overload;
    jc["dropped_detected"] = c.dropped_detected;
    jc["in_flight"] = c.in_flight;
    jc["attacks_injected"] = c.attacks_injected;
    jc["attacks_detected"] = c.attacks_detected;
    jc["attacks_missed_overload"] = c.attacks_missed_overload;
    jc["attacks_dropped_switch"] = c.attacks_dropped_switch;
    jc["attacks_delivered"] = c.attacks_delivered;
    jc["attacks_in_flight"] = c.attacks_in_flight;
    jc["re_established"] = c.re_established;
    jc["sessions_lost_total"] = c.sessions_lost_total;
    jv["counters"] = jc;

    // Per-series stats in first-emission order.
    ordered_json js = ordered_json::object();
    for (const auto& p : v.sim.metrics) {
      const char* name = series_name(p.series);
      if (!js.contains(name)) {
        js[name] = {{"count", 0},
                    {"mean", 0.0},
                    {"min", p.value},
                    {"max", p.value},
                    {"final", p.value}};
      }
      auto& st = js[name];
      int64_t n = st["count"].get<int64_t>() + 1;
      double prev_mean = st["mean"].get<double>();
      st["count"] = n;
      st["mean"] = prev_mean + (p.value - prev_mean) / static_cast<double>(n);
      st["min"] = std::min(st["min"].get<double>(), p.value);
      st["max"] = std::max(st["max"].get<double>(), p.value);
      st["final"] = p.value;
    }
    jv["series"] = js;

    jv["final_actives"] = v.sim.final_actives;
    jv["final_standbys"] = v.sim.final_standbys;

    ordered_json jr = ordered_json::array();
    for (const auto& resp : v.sim.responses) {
      jr.push_back({{"group", resp.group},
                    {"kind", resp.kind},
                    {"completed_s", ticks_to_seconds(resp.completed)},
                    {"elapsed_s", resp.elapsed_s}});
    }
    jv["responses"] = jr;

    ordered_json jw = ordered_json::array();
    for (const auto& sw : v.sim.switchovers) {
      jw.push_back({{"failed", sw.failed},
                    {"standby", sw.standby},
                    {"t_failure_s", ticks_to_seconds(sw.t_failure)},
                    {"t_detect_s", ticks_to_seconds(sw.t_detect)},
                    {"t_replace_sent_s", ticks_to_seconds(sw.t_replace_sent)},
                    {"t_rules_installed_s",
                     ticks_to_seconds(sw.t_rules_installed)},
                    {"total_s", sw.total_s()}});
    }
    jv["switchovers"] = jw;

    ordered_json jf = ordered_json::array();
    for (const auto& fa : v.sim.failure_audits) {
      jf.push_back({{"node", fa.node},
                    {"resolution", fa.resolution},
                    {"fault_time_s", ticks_to_seconds(fa.fault_time)},
                    {"resolved_time_s", ticks_to_seconds(fa.resolved_time)},
                    {"sessions_at_failure", fa.sessions_at_failure},
                    {"sessions_lost", fa.sessions_lost}});
    }
    jv["failures"] = jf;

    root["variants"].push_back(std::move(jv));
  }
  return root.dump(2) + "\n";
}

void write_outputs(const ScenarioResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path base(out_dir);
  std::error_code ec;
  fs::create_directories(base, ec);
  if (ec && !fs::is_directory(base))
    throw ConfigError("", "cannot create output directory: " + out_dir);

  write_text_file(base / "metrics.csv", render_metrics_csv(r));
  write_text_file(base / "log.tsv", render_logs_tsv(r));
  write_text_file(base / "summary.json", render_summary_json(r));

  auto write_variant_files = [&](const fs::path& dir, const VariantResult& v,
                                 const std::string& full_label) {
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
      throw ConfigError("", "cannot create output directory: " + dir.string());
    ScenarioResult solo;
    solo.name = full_label;
    solo.multi = false;
    solo.variants.push_back(v);
    solo.variants[0].variant.clear();
    write_text_file(dir / "config.json", serialize_config(v.cfg));
    write_text_file(dir / "metrics.csv", render_metrics_csv(solo));
    write_text_file(dir / "log.tsv", render_logs_tsv(solo));
    write_text_file(dir / "summary.json", render_summary_json(solo));
    write_text_file(dir / "rules.txt", v.sim.rules_dump);
  };

  if (r.multi) {
    for (const auto& v : r.variants)
      write_variant_files(base / "variants" / v.variant, v,
                          r.name + "/" + v.variant);
  } else {
    write_text_file(base / "config.json", serialize_config(r.variants[0].cfg));
    write_text_file(base / "rules.txt", r.variants[0].sim.rules_dump);
  }
}

std::string query_log_file(const std::string& path, const LogFilter& filter) {
  std::string text = read_text_file(path);
  std::string out;
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    auto rec = parse_log_line(line);
    if (!rec)
      throw ConfigError(
          path, "malformed log line " + std::to_string(line_no) + ": " + line);
    if (filter.matches(*rec)) {
      out += render_log_line(*rec);
      out += '\n';
    }
  }
  return out;
}

CompareRow compare_variants(const VariantResult& run,
                            const VariantResult& baseline) {
  if (run.cfg.seed != baseline.cfg.seed ||
      run.workload_hash != baseline.workload_hash)
    throw ConfigError("",
                      "compare requires identical seed and workload; got seed " +
                          std::to_string(run.cfg.seed) + "/" +
                          std::to_string(baseline.cfg.seed) + ", workload " +
                          hash_hex(run.workload_hash) + "/" +
                          hash_hex(baseline.workload_hash));
  CompareRow row;
  int64_t n_run = 0, n_base = 0, t_run = 0, t_base = 0;
  double lat_run = series_sum(run.sim.metrics, Series::latency_ms, &n_run);
  double lat_base =
      series_sum(baseline.sim.metrics, Series::latency_ms, &n_base);
  double thr_run = series_sum(run.sim.metrics, Series::throughput_rps, &t_run);
  double thr_base =
      series_sum(baseline.sim.metrics, Series::throughput_rps, &t_base);
  if (n_run == 0 || n_base == 0 || t_run == 0 || t_base == 0)
    throw ConfigError("", "compare needs latency and throughput samples on both sides");
  row.latency_run = lat_run / static_cast<double>(n_run);
  row.latency_baseline = lat_base / static_cast<double>(n_base);
  row.throughput_run = thr_run / static_cast<double>(t_run);
  row.throughput_baseline = thr_base / static_cast<double>(t_base);
  row.latency_overhead_pct =
      (row.latency_run - row.latency_baseline) / row.latency_baseline * 100.0;
  row.throughput_overhead_pct = (row.throughput_baseline - row.throughput_run) /
                                row.throughput_baseline * 100.0;
  return row;
}

namespace {

struct SummarySide {
  std::string scenario;
  struct Var {
    std::string variant;
    uint64_t seed = 0;
    std::string workload_hash;
    double latency_mean = 0;
    bool has_latency = false;
    double throughput_mean = 0;
    bool has_throughput = false;
  };
  std::vector<Var> vars;
};

SummarySide load_summary(const std::string& dir_or_file) {
  namespace fs = std::filesystem;
  fs::path p(dir_or_file);
  if (fs::is_directory(p)) p /= "summary.json";
  if (!fs::exists(p))
    throw ConfigError("", "no summary.json under: " + dir_or_file);
  ordered_json doc;
  try {
    doc = ordered_json::parse(read_text_file(p.string()));
  } catch (const json::exception& e) {
    throw SchemaError(p.string(), std::string("invalid JSON: ") + e.what());
  }
  SummarySide side;
  try {
    side.scenario = doc.at("scenario").get<std::string>();
    for (const auto& jv : doc.at("variants")) {
      SummarySide::Var v;
      v.variant = jv.at("variant").get<std::string>();
      v.seed = jv.at("seed").get<uint64_t>();
      v.workload_hash = jv.at("workload_hash").get<std::string>();
      const auto& series = jv.at("series");
      if (series.contains("latency_ms")) {
        v.latency_mean = series["latency_ms"].at("mean").get<double>();
        v.has_latency = true;
      }
      if (series.contains("throughput_rps")) {
        v.throughput_mean = series["throughput_rps"].at("mean").get<double>();
        v.has_throughput = true;
      }
      side.vars.push_back(std::move(v));
    }
  } catch (const json::exception& e) {
    throw SchemaError(p.string(),
                      std::string("summary missing fields: ") + e.what());
  }
  return side;
}

std::string side_label(const SummarySide& s, const SummarySide::Var& v) {
  return v.variant.empty() ? s.scenario : s.scenario + "/" + v.variant;
}

}  // namespace

std::string render_compare(const std::string& run_dir,
                           const std::string& baseline_dir) {
  SummarySide run = load_summary(run_dir);
  SummarySide base = load_summary(baseline_dir);

  std::vector<std::pair<const SummarySide::Var*, const SummarySide::Var*>>
      pairs;
  if (run.vars.size() == 1 && base.vars.size() == 1) {
    pairs.emplace_back(&run.vars[0], &base.vars[0]);
  } else {
    for (const auto& rv : run.vars) {
      const SummarySide::Var* match = nullptr;
      for (const auto& bv : base.vars)
        if (bv.variant == rv.variant) match = &bv;
      if (!match)
        throw ConfigError("", "no baseline variant named '" + rv.variant +
                                  "' to pair with");
      pairs.emplace_back(&rv, match);
    }
  }

  std::string out;
  for (auto [rv, bv] : pairs) {
    if (rv->seed != bv->seed || rv->workload_hash != bv->workload_hash)
      throw ConfigError(
          "", "compare requires identical seed and workload for pair " +
                  side_label(run, *rv) + " vs " + side_label(base, *bv));
    if (!rv->has_latency || !bv->has_latency || !rv->has_throughput ||
        !bv->has_throughput)
      throw ConfigError(
          "", "compare needs latency and throughput samples on both sides");
    double lat_over =
        (rv->latency_mean - bv->latency_mean) / bv->latency_mean * 100.0;
    double thr_over = (bv->throughput_mean - rv->throughput_mean) /
                      bv->throughput_mean * 100.0;
    out += "pair=" + side_label(run, *rv) + " vs " + side_label(base, *bv);
    out += " latency_run_ms=" + format_double(rv->latency_mean);
    out += " latency_baseline_ms=" + format_double(bv->latency_mean);
    out += " latency_overhead_pct=" + format_double(lat_over);
    out += " throughput_run_rps=" + format_double(rv->throughput_mean);
    out += " throughput_baseline_rps=" + format_double(bv->throughput_mean);
    out += " throughput_overhead_pct=" + format_double(thr_over);
    out += '\n';
  }
  return out;
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"deterministic simulator for chained security inspection"};
  app.require_subcommand(1);

  std::string scenario, out_dir, log_file, cmp_run, cmp_base;
  RunOptions opts;
  uint64_t seed_flag = 0;
  double duration_flag = 0;

  auto* run_cmd = app.add_subcommand("run", "run a scenario and write outputs");
  run_cmd->add_option("scenario", scenario,
                      "built-in scenario name or config file path")
      ->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  auto* seed_opt =
      run_cmd->add_option("--seed", seed_flag, "override the scenario seed");
  auto* dur_opt = run_cmd->add_option("--duration", duration_flag,
                                      "override the run duration (seconds)");
  run_cmd->add_option("--set", opts.overrides,
                      "config override key=value (dotted path)");

  auto* logs_cmd = app.add_subcommand("logs", "filter a log file");
  logs_cmd->add_option("file", log_file, "log file (tab-separated)")
      ->required();
  double from_s = 0, to_s = 0;
  std::string sev_text, kind_text, source_text;
  auto* from_opt =
      logs_cmd->add_option("--from", from_s, "earliest time (seconds)");
  auto* to_opt = logs_cmd->add_option("--to", to_s, "latest time (seconds)");
  auto* sev_opt = logs_cmd->add_option("--severity", sev_text,
                                       "severity filter (info|warn|critical)");
  auto* kind_opt = logs_cmd->add_option(
      "--kind", kind_text, "kind filter (decision|switchover|drop|fault|protocol)");
  auto* source_opt =
      logs_cmd->add_option("--source", source_text, "exact source filter");

  auto* cmp_cmd = app.add_subcommand(
      "compare", "latency/throughput overhead of one run against a baseline");
  cmp_cmd->add_option("run_dir", cmp_run, "run output directory")->required();
  cmp_cmd->add_option("baseline_dir", cmp_base, "baseline output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      if (*seed_opt) opts.seed = seed_flag;
      if (*dur_opt) opts.duration_s = duration_flag;
      ScenarioResult res = run_scenario(scenario, opts);
      if (out_dir.empty()) out_dir = "out/" + res.name;
      write_outputs(res, out_dir);
      out << "scenario=" << res.name << " variants=" << res.variants.size()
          << " out=" << out_dir << "\n";
      for (const auto& v : res.variants) {
        const SimCounters& c = v.sim.counters;
        out << "variant=" << (v.variant.empty() ? "-" : v.variant)
            << " injected=" << c.injected << " delivered=" << c.delivered
            << " dropped=" << (c.dropped_switch + c.dropped_overload +
                               c.dropped_detected)
            << " events=" << v.sim.event_count << "\n";
      }
    } else if (logs_cmd->parsed()) {
      LogFilter filter;
      if (*from_opt) filter.from_s = from_s;
      if (*to_opt) filter.to_s = to_s;
      if (*sev_opt) {
        Severity sev;
        if (!parse_severity(sev_text, &sev))
          throw ConfigError("--severity", "unknown severity: " + sev_text);
        filter.severity = sev;
      }
      if (*kind_opt) {
        LogKind kind;
        if (!parse_log_kind(kind_text, &kind))
          throw ConfigError("--kind", "unknown kind: " + kind_text);
        filter.kind = kind;
      }
      if (*source_opt) filter.source = source_text;
      out << query_log_file(log_file, filter);
    } else if (cmp_cmd->parsed()) {
      out << render_compare(cmp_run, cmp_base);
    }
  } catch (const SimAbort& e) {
    err << "simulation aborted: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace secchain
