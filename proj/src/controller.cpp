#include "secchain/controller.hpp"

#include <algorithm>
#include <numeric>

namespace secchain {

const char* scale_kind_name(ScaleKind k) {
  switch (k) {
    case ScaleKind::None: return "none";
    case ScaleKind::Rebalance: return "rebalance";
    case ScaleKind::ScaleOut: return "scale_out";
    case ScaleKind::ScaleIn: return "scale_in";
  }
  return "none";
}

ScalingDecision plan_scaling(const GroupPolicyInput& in, const PolicyConfig& policy) {
  ScalingDecision d;
  if (in.active_count == 0 || in.utils.empty()) return d;
  double maxu = *std::max_element(in.utils.begin(), in.utils.end());
  double minu = *std::min_element(in.utils.begin(), in.utils.end());
  double mean = std::accumulate(in.utils.begin(), in.utils.end(), 0.0) /
                static_cast<double>(in.utils.size());
  d.trigger_max = maxu;
  d.trigger_min = minu;
  d.trigger_mean = mean;

  if (in.active_count > 1 && maxu - minu > policy.imbalance_gap_threshold) {
    d.kind = ScaleKind::Rebalance;
    return d;
  }
  if (minu > policy.overload_threshold && in.active_count < in.max_active) {
    d.kind = ScaleKind::ScaleOut;
    return d;
  }
  if (mean < policy.scalein_mean_threshold && in.active_count > 1) {
    int victim = 0;
    for (int i = 1; i < static_cast<int>(in.utils.size()); ++i) {
      // lowest utilization; ties go to the newest node (highest index)
      if (in.utils[i] <= in.utils[victim]) victim = i;
    }
    int64_t total = std::accumulate(in.offered.begin(), in.offered.end(), int64_t{0});
    double projected =
        in.capacity_per_window > 0
            ? static_cast<double>(total) /
                  (static_cast<double>(in.active_count - 1) *
                   static_cast<double>(in.capacity_per_window))
            : 0;
    if (projected <= policy.overload_threshold) {
      d.kind = ScaleKind::ScaleIn;
      d.victim_index = victim;
      return d;
    }
  }
  return d;
}

bool can_absorb_failed_load(const std::vector<int64_t>& survivor_offered,
                            int64_t failed_offered, int64_t capacity_per_window,
                            double overload_threshold) {
  if (survivor_offered.empty() || capacity_per_window <= 0) return false;
  int64_t total = failed_offered;
  for (int64_t v : survivor_offered) total += v;
  double projected = static_cast<double>(total) /
                     (static_cast<double>(survivor_offered.size()) *
                      static_cast<double>(capacity_per_window));
  return projected <= overload_threshold;
}

namespace {

// Buckets sorted by (load desc, index asc) — the deterministic LPT order.
std::vector<int> lpt_order(const std::vector<int64_t>& loads) {
  std::vector<int> order(loads.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return loads[a] > loads[b];
  });
  return order;
}

int least_loaded(const std::vector<int64_t>& slot_loads,
                 const std::vector<bool>* allowed = nullptr) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(slot_loads.size()); ++i) {
    if (allowed && !(*allowed)[i]) continue;
    if (best < 0 || slot_loads[i] < slot_loads[best]) best = i;
  }
  return best;
}

}  // namespace

std::vector<int> plan_spread(const std::vector<int64_t>& bucket_loads, int slots) {
  std::vector<int> assign(bucket_loads.size(), 0);
  std::vector<int64_t> slot_loads(static_cast<size_t>(slots), 0);
  for (int b : lpt_order(bucket_loads)) {
    int s = least_loaded(slot_loads);
    assign[static_cast<size_t>(b)] = s;
    slot_loads[static_cast<size_t>(s)] += bucket_loads[static_cast<size_t>(b)];
  }
  return assign;
}

std::vector<int> plan_rebalance(std::vector<int> assign,
                                const std::vector<int64_t>& bucket_loads,
                                int slots, int64_t capacity_per_window,
                                double gap_threshold) {
  if (slots < 2 || capacity_per_window <= 0) return assign;
  std::vector<int64_t> slot_loads(static_cast<size_t>(slots), 0);
  for (size_t b = 0; b < assign.size(); ++b)
    slot_loads[static_cast<size_t>(assign[b])] += bucket_loads[b];
  int64_t gap_abs = static_cast<int64_t>(gap_threshold * static_cast<double>(capacity_per_window));

  for (;;) {
    int hi = 0, lo = 0;
    for (int i = 1; i < slots; ++i) {
      if (slot_loads[i] > slot_loads[hi]) hi = i;
      if (slot_loads[i] < slot_loads[lo]) lo = i;
    }
    if (slot_loads[hi] - slot_loads[lo] <= gap_abs) break;
    // largest bucket on hi whose move does not overshoot (ties: lowest index)
    int pick = -1;
    int64_t imbalance = slot_loads[hi] - slot_loads[lo];
    for (size_t b = 0; b < assign.size(); ++b) {
      if (assign[b] != hi) continue;
      if (bucket_loads[b] <= 0) continue;
      if (bucket_loads[b] >= imbalance) continue;  // would not improve the gap
      if (pick < 0 || bucket_loads[b] > bucket_loads[static_cast<size_t>(pick)])
        pick = static_cast<int>(b);
    }
    if (pick < 0) break;
    assign[static_cast<size_t>(pick)] = lo;
    slot_loads[hi] -= bucket_loads[static_cast<size_t>(pick)];
    slot_loads[lo] += bucket_loads[static_cast<size_t>(pick)];
  }
  return assign;
}

std::vector<int> plan_drain(std::vector<int> assign,
                            const std::vector<int64_t>& bucket_loads,
                            int victim_slot, int slots,
                            const std::vector<bool>* allowed) {
  std::vector<int64_t> slot_loads(static_cast<size_t>(slots), 0);
  for (size_t b = 0; b < assign.size(); ++b)
    if (assign[b] != victim_slot) slot_loads[static_cast<size_t>(assign[b])] += bucket_loads[b];
  std::vector<bool> mask =
      allowed ? *allowed : std::vector<bool>(static_cast<size_t>(slots), true);
  mask[static_cast<size_t>(victim_slot)] = false;
  for (int b : lpt_order(bucket_loads)) {
    if (assign[static_cast<size_t>(b)] != victim_slot) continue;
    int s = least_loaded(slot_loads, &mask);
    assign[static_cast<size_t>(b)] = s;
    slot_loads[static_cast<size_t>(s)] += bucket_loads[static_cast<size_t>(b)];
  }
  return assign;
}

std::vector<int> plan_takeover(std::vector<int> assign, int victim_slot,
                               int target_slot) {
  for (auto& s : assign)
    if (s == victim_slot) s = target_slot;
  return assign;
}

}  // namespace secchain
