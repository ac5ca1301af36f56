#include "secchain/metrics.hpp"

namespace secchain {

const char* series_name(Series s) {
  switch (s) {
    case Series::detection_rate: return "detection_rate";
    case Series::utilization: return "utilization";
    case Series::latency_ms: return "latency_ms";
    case Series::throughput_rps: return "throughput_rps";
    case Series::sessions_lost: return "sessions_lost";
    case Series::standby_ratio: return "standby_ratio";
    case Series::response_time_s: return "response_time_s";
  }
  return "utilization";
}

bool parse_series(const std::string& name, Series* out) {
  for (int i = 0; i <= static_cast<int>(Series::response_time_s); ++i) {
    auto s = static_cast<Series>(i);
    if (name == series_name(s)) {
      *out = s;
      return true;
    }
  }
  return false;
}

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warn: return "warn";
    case Severity::Critical: return "critical";
  }
  return "info";
}

bool parse_severity(const std::string& name, Severity* out) {
  for (int i = 0; i <= static_cast<int>(Severity::Critical); ++i) {
    auto s = static_cast<Severity>(i);
    if (name == severity_name(s)) {
      *out = s;
      return true;
    }
  }
  return false;
}

const char* log_kind_name(LogKind k) {
  switch (k) {
    case LogKind::Decision: return "decision";
    case LogKind::Switchover: return "switchover";
    case LogKind::Drop: return "drop";
    case LogKind::Fault: return "fault";
    case LogKind::Protocol: return "protocol";
  }
  return "decision";
}

bool parse_log_kind(const std::string& name, LogKind* out) {
  for (int i = 0; i <= static_cast<int>(LogKind::Protocol); ++i) {
    auto k = static_cast<LogKind>(i);
    if (name == log_kind_name(k)) {
      *out = k;
      return true;
    }
  }
  return false;
}

bool LogFilter::matches(const LogRecord& r) const {
  double t = ticks_to_seconds(r.t);
  if (from_s && t < *from_s) return false;
  if (to_s && t > *to_s) return false;
  if (severity && r.severity != *severity) return false;
  if (kind && r.kind != *kind) return false;
  if (source && r.source != *source) return false;
  return true;
}

void ElmdStore::append(Tick t, Severity sev, std::string source, LogKind kind,
                       std::string payload) {
  records_.push_back(LogRecord{t, sev, std::move(source), kind, std::move(payload)});
}

std::vector<LogRecord> ElmdStore::query(const LogFilter& filter) const {
  std::vector<LogRecord> out;
  for (const auto& r : records_)
    if (filter.matches(r)) out.push_back(r);
  return out;
}

std::string render_log_line(const LogRecord& r) {
  return format_time_s(r.t) + "\t" + severity_name(r.severity) + "\t" +
         r.source + "\t" + log_kind_name(r.kind) + "\t" + r.payload;
}

std::optional<LogRecord> parse_log_line(const std::string& line) {
  LogRecord r;
  size_t pos = 0;
  std::vector<std::string> fields;
  for (int i = 0; i < 4; ++i) {
    size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) return std::nullopt;
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  fields.push_back(line.substr(pos));
  try {
    r.t = seconds_to_ticks(std::stod(fields[0]));
  } catch (...) {
    return std::nullopt;
  }
  if (!parse_severity(fields[1], &r.severity)) return std::nullopt;
  r.source = fields[2];
  if (!parse_log_kind(fields[3], &r.kind)) return std::nullopt;
  r.payload = fields[4];
  return r;
}

}  // namespace secchain
