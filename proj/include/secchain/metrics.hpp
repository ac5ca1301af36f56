#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "secchain/sim_time.hpp"

namespace secchain {

// Closed set of exported series.
enum class Series : uint8_t {
  detection_rate = 0,
  utilization,
  latency_ms,
  throughput_rps,
  sessions_lost,
  standby_ratio,
  response_time_s,
};

const char* series_name(Series s);
bool parse_series(const std::string& name, Series* out);

struct MetricPoint {
  Tick t = 0;
  Series series = Series::utilization;
  double value = 0;
};

enum class Severity : uint8_t { Info = 0, Warn, Critical };
enum class LogKind : uint8_t { Decision = 0, Switchover, Drop, Fault, Protocol };

const char* severity_name(Severity s);
bool parse_severity(const std::string& name, Severity* out);
const char* log_kind_name(LogKind k);
bool parse_log_kind(const std::string& name, LogKind* out);

// ELMD record: append-only, totally ordered by (time, arrival sequence).
struct LogRecord {
  Tick t = 0;
  Severity severity = Severity::Info;
  std::string source;
  LogKind kind = LogKind::Decision;
  std::string payload;
};

struct LogFilter {
  std::optional<double> from_s;
  std::optional<double> to_s;
  std::optional<Severity> severity;
  std::optional<LogKind> kind;
  std::optional<std::string> source;

  bool matches(const LogRecord& r) const;
};

// In-run append-only event/log store with conjunctive query.
class ElmdStore {
 public:
  void append(Tick t, Severity sev, std::string source, LogKind kind,
              std::string payload);
  const std::vector<LogRecord>& records() const { return records_; }
  std::vector<LogRecord> query(const LogFilter& filter) const;

 private:
  std::vector<LogRecord> records_;
};

// One record per line: time_s<TAB>severity<TAB>source<TAB>kind<TAB>payload
std::string render_log_line(const LogRecord& r);
std::optional<LogRecord> parse_log_line(const std::string& line);

}  // namespace secchain
