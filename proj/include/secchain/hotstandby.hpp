#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "secchain/sim_time.hpp"

namespace secchain {

// Directed heartbeat edge: `from` probes `to` every interval and counts
// consecutive unanswered probes. Failure is declared exactly when the miss
// count reaches the configured threshold.
struct HeartbeatPeerState {
  int consecutive_misses = 0;
  bool probe_outstanding = false;
  bool declared = false;
  Tick last_response = -1;
};

class HeartbeatMesh {
 public:
  using ProbeFn = std::function<void(int from, int to)>;
  using DeclareFn = std::function<void(int from, int to)>;

  void add_pair(int a, int b);      // directed a->b
  void remove_peer(int node);       // drop every edge touching node
  bool has_pair(int from, int to) const;
  const HeartbeatPeerState* state(int from, int to) const;

  // One heartbeat interval: first scores outstanding probes (a probe sent
  // last tick and still unanswered is a miss), declaring failures at the
  // threshold, then sends the next round of probes on undeclared edges.
  void tick(int miss_threshold, const ProbeFn& probe, const DeclareFn& declare);

  // A ResHeartbeat reached `from` about `to`.
  void on_response(int from, int to, Tick now);

 private:
  std::map<std::pair<int, int>, HeartbeatPeerState> edges_;
};

struct SwitchoverRecord {
  std::string failed;
  std::string standby;
  Tick t_failure = 0;
  Tick t_detect = 0;         // heartbeat miss threshold reached
  Tick t_replace_sent = 0;
  Tick t_rules_installed = 0;
  double total_s() const { return ticks_to_seconds(t_rules_installed - t_failure); }
};

}  // namespace secchain
