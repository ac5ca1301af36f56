#include "secchain/hotstandby.hpp"

namespace secchain {

void HeartbeatMesh::add_pair(int a, int b) {
  edges_.try_emplace({a, b});
}

void HeartbeatMesh::remove_peer(int node) {
  for (auto it = edges_.begin(); it != edges_.end();) {
    if (it->first.first == node || it->first.second == node)
      it = edges_.erase(it);
    else
      ++it;
  }
}

bool HeartbeatMesh::has_pair(int from, int to) const {
  return edges_.count({from, to}) > 0;
}

const HeartbeatPeerState* HeartbeatMesh::state(int from, int to) const {
  auto it = edges_.find({from, to});
  return it == edges_.end() ? nullptr : &it->second;
}

void HeartbeatMesh::tick(int miss_threshold, const ProbeFn& probe,
                         const DeclareFn& declare) {
  // Score first, over a stable key order, so declarations within one tick are
  // deterministic.
  for (auto& [key, st] : edges_) {
    if (st.declared) continue;
    if (st.probe_outstanding) {
      st.consecutive_misses++;
      if (st.consecutive_misses >= miss_threshold) {
        st.declared = true;
        declare(key.first, key.second);
      }
    }
  }
  for (auto& [key, st] : edges_) {
    if (st.declared) continue;
    st.probe_outstanding = true;
    probe(key.first, key.second);
  }
}

void HeartbeatMesh::on_response(int from, int to, Tick now) {
  auto it = edges_.find({from, to});
  if (it == edges_.end()) return;
  it->second.probe_outstanding = false;
  it->second.consecutive_misses = 0;
  it->second.last_response = now;
}

}  // namespace secchain
