#include "secchain/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace secchain {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

FiveTuple synth_client_tuple(int global_client_index, int service_index,
                             int buckets) {
  FiveTuple t;
  t.src_ip = 0x0A000000u + static_cast<uint32_t>(global_client_index) + 1;
  t.dst_ip = 0xC0A80000u + static_cast<uint32_t>(service_index) + 1;
  t.dst_port = 80;
  t.proto = 6;
  const int want = global_client_index % buckets;
  for (uint32_t dp = 80; dp < 80u + 60000u; ++dp) {
    t.dst_port = static_cast<uint16_t>(dp);
    for (uint32_t sp = 1024; sp < 65536; ++sp) {
      t.src_port = static_cast<uint16_t>(sp);
      if (session_bucket(t, buckets) == want) return t;
    }
  }
  throw SimAbort("client tuple synthesis failed to hit bucket " +
                 std::to_string(want));
}

namespace {

enum class EvKind : uint8_t {
  WindowClose = 0,
  HeartbeatTick,
  Fault,
  ClientArrival,
  MsgDeliver,
  FailureDetect,
  NodeReady,
  PipelineComplete,
  StandbyReady,
};

struct Ev {
  Tick t = 0;
  uint64_t seq = 0;
  EvKind kind = EvKind::WindowClose;
  int a = 0;
  int b = 0;
};

struct EvAfter {
  bool operator()(const Ev& x, const Ev& y) const {
    if (x.t != y.t) return x.t > y.t;
    return x.seq > y.seq;
  }
};

struct ClientState {
  FiveTuple tuple;
  int bucket = 0;
  std::mt19937_64 rng;
  int64_t next_slot = 0;   // constant-rate arrivals
  double next_time_s = 0;  // ramp arrivals
  int64_t session_packets = 0;
};

struct WorkloadRt {
  const WorkloadSpec* spec = nullptr;
  int service = -1;
  double start_s = 0;
  double end_s = 0;
  double rate0 = 0;  // per client, after rate_divisor
  double rate1 = 0;
  bool ramp = false;
  std::vector<ClientState> clients;
};

struct Pipeline {
  int group = -1;
  std::string kind_name;
  Tick anchor = 0;
  Tick completes = 0;
  std::vector<int> slot_handles;  // -1 = node created mid-pipeline
  std::vector<int> assign_slots;  // bucket -> index into slot_handles
  int victim = -1;                // destroyed / failed node handle
  int added = -1;                 // node joining the active set
  ScalingDecision decision;
  int audit = -1;          // index into failure audits
  bool is_failure = false;
  bool is_switchover = false;
  bool is_emergency = false;
  int64_t sessions_lost = 0;
  SwitchoverRecord swrec;
};

struct GroupRt {
  std::vector<int> actives;  // handles, creation order
  int standby = -1;
  int next_ordinal = 1;
  int next_standby_ordinal = 1;
  Tick busy_until = -1;
  int pending_failures = 0;
  bool standby_reserved = false;
  std::map<int, bool> awaiting_replace;  // failed handle -> standby offer due
  std::vector<int64_t> last_bucket_loads;
  std::vector<int> assign;  // bucket -> handle
  std::unordered_set<FiveTuple, TupleHash> ever_sessions;
};

struct WindowAgg {
  int64_t injected = 0;
  int64_t delivered = 0;
  double latency_sum_ms = 0;
  int64_t attacks = 0;
  int64_t attacks_detected = 0;
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg) : cfg_(cfg) {}

  SimResult run() {
    init();
    while (!queue_.empty()) {
      Ev ev = queue_.top();
      queue_.pop();
      if (ev.t > duration_ticks_) break;
      ++result_.event_count;
      dispatch(ev);
    }
    finish();
    return std::move(result_);
  }

 private:
  // --- setup -----------------------------------------------------------------

  void init() {
    window_ticks_ = seconds_to_ticks(cfg_.timers.stats_report_period_s);
    hb_ticks_ = seconds_to_ticks(cfg_.timers.heartbeat_interval_s);
    ctrl_ticks_ = seconds_to_ticks(cfg_.timers.control_latency_s);
    replace_ticks_ = seconds_to_ticks(cfg_.timers.replace_leg_latency_s);
    detect_ticks_ = seconds_to_ticks(cfg_.timers.detect_phase_s);
    gen_ticks_ = seconds_to_ticks(cfg_.timers.generate_phase_s);
    install_ticks_ = seconds_to_ticks(cfg_.timers.rule_install_latency_s);
    Tick pipeline_ticks = detect_ticks_ + gen_ticks_ + install_ticks_;
    raw_create_ticks_ = std::max<Tick>(
        0, seconds_to_ticks(cfg_.timers.node_create_latency_s) - pipeline_ticks);
    duration_ticks_ = seconds_to_ticks(cfg_.duration_s);
    per_hop_ms_ = cfg_.timers.per_hop_latency_ms;
    ssl_ms_ = cfg_.timers.sslvpn_latency_ms;
    baseline_ms_ = cfg_.timers.baseline_service_latency_ms;
    buckets_ = cfg_.policy.session_buckets;
    fault_rng_.seed(splitmix64(cfg_.seed ^ 0x5eedfa17u));

    svc_chain_groups_.resize(cfg_.services.size());
    for (size_t s = 0; s < cfg_.services.size(); ++s) {
      const ChainSpec& chain = chain_for_service(cfg_, cfg_.services[s].id);
      for (const std::string& gid : chain.hops)
        svc_chain_groups_[s].push_back(cfg_.group_index(gid));
    }

    switch_.configure_groups(static_cast<int>(cfg_.groups.size()), buckets_);
    groups_.resize(cfg_.groups.size());
    for (size_t g = 0; g < cfg_.groups.size(); ++g) {
      GroupRt& gr = groups_[g];
      for (int i = 0; i < cfg_.groups[g].initial_active; ++i)
        gr.actives.push_back(
            create_node(static_cast<int>(g), gr.next_ordinal++, false, 0));
      gr.standby = create_node(static_cast<int>(g), gr.next_standby_ordinal++,
                               true, 0);
      for (int a : gr.actives) {
        mesh_.add_pair(a, gr.standby);
        mesh_.add_pair(gr.standby, a);
      }
      gr.assign.resize(static_cast<size_t>(buckets_));
      for (int b = 0; b < buckets_; ++b)
        gr.assign[static_cast<size_t>(b)] =
            gr.actives[static_cast<size_t>(b) % gr.actives.size()];
      gr.last_bucket_loads.assign(static_cast<size_t>(buckets_), 0);
    }
    install_assignments(0);

    for (Tick t = window_ticks_; t <= duration_ticks_; t += window_ticks_)
      push(t, EvKind::WindowClose, 0, 0);
    for (Tick t = hb_ticks_; t <= duration_ticks_; t += hb_ticks_)
      push(t, EvKind::HeartbeatTick, 0, 0);
    for (size_t f = 0; f < cfg_.faults.size(); ++f)
      push(seconds_to_ticks(cfg_.faults[f].time_s), EvKind::Fault,
           static_cast<int>(f), 0);

    workloads_.reserve(cfg_.workloads.size());
    int global_client = 0;
    for (size_t w = 0; w < cfg_.workloads.size(); ++w) {
      const WorkloadSpec& spec = cfg_.workloads[w];
      WorkloadRt rt;
      rt.spec = &spec;
      rt.service = cfg_.service_index(spec.service);
      rt.start_s = spec.start_s;
      rt.end_s = spec.end_s.value_or(cfg_.duration_s);
      rt.rate0 = spec.rate_rps / spec.rate_divisor;
      rt.rate1 = spec.rate_end_rps.value_or(spec.rate_rps) / spec.rate_divisor;
      rt.ramp = spec.rate_end_rps.has_value();
      rt.clients.resize(static_cast<size_t>(spec.clients));
      for (int c = 0; c < spec.clients; ++c) {
        ClientState& cs = rt.clients[static_cast<size_t>(c)];
        cs.tuple = synth_client_tuple(global_client, rt.service, buckets_);
        cs.bucket = global_client % buckets_;
        cs.rng.seed(splitmix64(cfg_.seed) ^
                    splitmix64((static_cast<uint64_t>(w) << 32) |
                               static_cast<uint64_t>(global_client)));
        cs.next_time_s = rt.start_s;
        ++global_client;
      }
      workloads_.push_back(std::move(rt));
    }
    for (size_t w = 0; w < workloads_.size(); ++w)
      for (size_t c = 0; c < workloads_[w].clients.size(); ++c)
        schedule_next_arrival(static_cast<int>(w), static_cast<int>(c));
  }

  int create_node(int group, int ordinal, bool standby, Tick now) {
    NodeRef ref{group, ordinal, standby};
    const GroupSpec& spec = cfg_.groups[static_cast<size_t>(group)];
    nodes_.push_back(std::make_unique<MiddleboxNode>(
        ref, spec.kind, spec.node_capacity, cfg_.timers.stats_report_period_s,
        cfg_.timers.session_table_limit, now));
    int h = static_cast<int>(nodes_.size()) - 1;
    handle_of_[pack_ref(ref)] = h;
    node_names_.push_back(node_id(cfg_, ref));
    return h;
  }

  static uint64_t pack_ref(const NodeRef& r) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(r.group)) << 33) |
           (static_cast<uint64_t>(static_cast<uint32_t>(r.ordinal)) << 1) |
           (r.standby ? 1u : 0u);
  }

  // --- event plumbing ----------------------------------------------------------

  void push(Tick t, EvKind kind, int a, int b) {
    if (static_cast<int64_t>(++scheduled_) > cfg_.timers.event_cap)
      throw SimAbort("event cap exceeded (" +
                     std::to_string(cfg_.timers.event_cap) + ")");
    queue_.push(Ev{t, seq_++, kind, a, b});
  }

  int send_msg(MsgKind kind, int from, int to, Tick send, Tick latency,
               int64_t p1, int64_t p2) {
    Message m;
    m.kind = kind;
    m.sender = from;
    m.receiver = to;
    m.send_time = send;
    m.deliver_time = send + latency;
    m.p1 = p1;
    m.p2 = p2;
    int idx = static_cast<int>(msgs_.size());
    msgs_.push_back(m);
    push(m.deliver_time, EvKind::MsgDeliver, idx, 0);
    return idx;
  }

  void dispatch(const Ev& ev) {
    switch (ev.kind) {
      case EvKind::WindowClose: on_window_close(ev.t); break;
      case EvKind::HeartbeatTick: on_heartbeat_tick(ev.t); break;
      case EvKind::Fault: on_fault(ev.a, ev.t); break;
      case EvKind::ClientArrival:
        inject(workloads_[static_cast<size_t>(ev.a)],
               workloads_[static_cast<size_t>(ev.a)]
                   .clients[static_cast<size_t>(ev.b)],
               ev.t);
        schedule_next_arrival(ev.a, ev.b);
        break;
      case EvKind::MsgDeliver: on_msg(ev.a); break;
      case EvKind::FailureDetect: on_failure_detect(ev.a, ev.t); break;
      case EvKind::NodeReady: on_node_ready(ev.a, ev.t); break;
      case EvKind::PipelineComplete: on_pipeline_complete(ev.a, ev.t); break;
      case EvKind::StandbyReady: on_standby_ready(ev.a, ev.t); break;
    }
  }

  // --- workload ---------------------------------------------------------------

  double ramp_rate(const WorkloadRt& wl, double t) const {
    if (!wl.ramp) return wl.rate0;
    double span = wl.end_s - wl.start_s;
    if (span <= 0) return wl.rate0;
    double f = (t - wl.start_s) / span;
    return wl.rate0 + (wl.rate1 - wl.rate0) * f;
  }

  void schedule_next_arrival(int w, int c) {
    WorkloadRt& wl = workloads_[static_cast<size_t>(w)];
    ClientState& cs = wl.clients[static_cast<size_t>(c)];
    double t;
    if (!wl.ramp) {
      if (wl.rate0 <= 0) return;
      // Slot k lands in [start + k/rate, start + (k+1)/rate): exactly `rate`
      // arrivals per second for integer rates, jittered inside the slot.
      t = wl.start_s + (static_cast<double>(cs.next_slot) +
                        0.999 * uniform01(cs.rng)) /
                           wl.rate0;
      ++cs.next_slot;
    } else {
      double rate = ramp_rate(wl, cs.next_time_s);
      if (rate <= 0) return;
      cs.next_time_s += 1.0 / rate;
      t = cs.next_time_s;
    }
    if (t >= wl.end_s) return;
    Tick tt = seconds_to_ticks(t);
    if (tt >= seconds_to_ticks(wl.end_s)) return;
    push(tt, EvKind::ClientArrival, w, c);
  }

  void inject(WorkloadRt& wl, ClientState& cs, Tick now) {
    PacketDescriptor pkt;
    pkt.tuple = cs.tuple;
    pkt.service = wl.service;
    pkt.bucket = cs.bucket;
    pkt.session_packet_index = cs.session_packets++;
    pkt.timestamp = now;
    double u_attack = uniform01(cs.rng);
    double u_dir = uniform01(cs.rng);
    double acc = 0;
    for (const auto& [tag, frac] : wl.spec->attack_mix) {
      acc += frac;
      if (u_attack < acc) {
        pkt.tag = tag;
        break;
      }
    }
    pkt.direction = u_dir < wl.spec->external_fraction ? Direction::External
                                                       : Direction::Internal;
    traverse(pkt, now);
  }

  void traverse(const PacketDescriptor& packet, Tick inject_t) {
    PacketDescriptor pkt = packet;
    ++counters_.injected;
    int64_t widx = inject_t / window_ticks_;
    WindowAgg& agg = window_aggs_[widx];
    ++agg.injected;
    const bool attack = pkt.tag != AttackTag::NONE;
    if (attack) {
      ++counters_.attacks_injected;
      ++agg.attacks;
    }

    const auto& chain = svc_chain_groups_[static_cast<size_t>(pkt.service)];
    double lat_ms = 0;
    for (int hop = 0; hop <= static_cast<int>(chain.size()); ++hop) {
      Action act = switch_.lookup(pkt.service, pkt.direction, pkt.bucket, hop);
      if (act.kind == Action::Kind::Drop) {
        Tick at = inject_t + millis_to_ticks(lat_ms);
        if (at <= duration_ticks_) {
          ++counters_.dropped_switch;
          if (attack) ++counters_.attacks_dropped_switch;
          note_drop(at, "vswitch", "no_rule");
        } else {
          ++counters_.in_flight;
          if (attack) ++counters_.attacks_in_flight;
        }
        return;
      }
      if (act.kind == Action::Kind::Deliver) {
        lat_ms += per_hop_ms_;
        Tick at = inject_t + millis_to_ticks(lat_ms);
        if (at <= duration_ticks_) {
          ++counters_.delivered;
          if (attack) ++counters_.attacks_delivered;
          ++agg.delivered;
          agg.latency_sum_ms += lat_ms + baseline_ms_;
        } else {
          ++counters_.in_flight;
          if (attack) ++counters_.attacks_in_flight;
        }
        return;
      }
      // ForwardTo a middlebox node.
      lat_ms += per_hop_ms_;
      Tick arrival = inject_t + millis_to_ticks(lat_ms);
      auto it = handle_of_.find(pack_ref(act.node));
      if (it == handle_of_.end())
        throw SimAbort("flow rule forwards to unknown node");
      int h = it->second;
      MiddleboxNode& node = *nodes_[static_cast<size_t>(h)];
      if (node.ref().group != chain[static_cast<size_t>(hop)])
        throw SimAbort("flow rule forwards outside the chain order");
      switch_.note_forward(act.node, node.ref().group, pkt.bucket,
                           pkt.size_bytes);
      if (!node.alive()) {
        if (arrival <= duration_ticks_) {
          ++counters_.dropped_switch;
          if (attack) ++counters_.attacks_dropped_switch;
          note_drop(arrival, node_names_[static_cast<size_t>(h)], "dead_node");
        } else {
          ++counters_.in_flight;
          if (attack) ++counters_.attacks_in_flight;
        }
        return;
      }
      Verdict v = node.process(pkt, widx, arrival);
      if (v.kind == Verdict::Kind::DropOverload) {
        if (arrival <= duration_ticks_) {
          ++counters_.dropped_overload;
          if (attack) ++counters_.attacks_missed_overload;
          note_drop(arrival, node_names_[static_cast<size_t>(h)], "overload");
        } else {
          ++counters_.in_flight;
          if (attack) ++counters_.attacks_in_flight;
        }
        return;
      }
      if (v.kind == Verdict::Kind::DropDetected) {
        if (arrival <= duration_ticks_) {
          ++counters_.dropped_detected;
          if (attack) {
            ++counters_.attacks_detected;
            ++agg.attacks_detected;
          }
          note_drop(arrival, node_names_[static_cast<size_t>(h)],
                    std::string("detected_") + attack_tag_name(v.tag));
        } else {
          ++counters_.in_flight;
          if (attack) ++counters_.attacks_in_flight;
        }
        return;
      }
      // Forwarded onward.
      GroupRt& gr = groups_[static_cast<size_t>(node.ref().group)];
      if (v.session_created) {
        if (gr.ever_sessions.count(pkt.tuple)) {
          ++counters_.re_established;
        } else {
          gr.ever_sessions.insert(pkt.tuple);
        }
        if (!node.is_standby() && gr.standby >= 0 &&
            nodes_[static_cast<size_t>(gr.standby)]->alive()) {
          StateUpdate up = node.export_update();
          int uidx = static_cast<int>(updates_.size());
          updates_.push_back(std::move(up));
          send_msg(MsgKind::ReqInform, h, gr.standby, arrival, ctrl_ticks_,
                   uidx, h);
        }
      }
      if (node.kind() == GroupKind::SSLVPN) {
        lat_ms += ssl_ms_;
        pkt.encrypted = true;
      }
    }
    throw SimAbort("chain traversal exceeded the hop bound");
  }

  // --- logging helpers ----------------------------------------------------------

  void note_drop(Tick at, const std::string& source, const std::string& reason) {
    ++agg_drops_[std::make_tuple(at / window_ticks_, source, reason)];
  }

  void flush_drop_logs(int64_t widx, Tick stamp) {
    for (auto it = agg_drops_.begin(); it != agg_drops_.end();) {
      if (std::get<0>(it->first) == widx) {
        elmd_.append(stamp, Severity::Info, std::get<1>(it->first),
                     LogKind::Drop,
                     "reason=" + std::get<2>(it->first) +
                         " count=" + std::to_string(it->second));
        it = agg_drops_.erase(it);
      } else {
        ++it;
      }
    }
  }

  void metric(Tick t, Series s, double v) {
    result_.metrics.push_back(MetricPoint{t, s, v});
  }

  const std::string& endpoint_name(int h) {
    static const std::string kController = "controller";
    static const std::string kSwitch = "vswitch";
    if (h == kEndpointController) return kController;
    if (h == kEndpointSwitch) return kSwitch;
    return node_names_[static_cast<size_t>(h)];
  }

  // --- window close: stats, metrics, load decisions ------------------------------

  void on_window_close(Tick now) {
    int64_t widx = now / window_ticks_ - 1;
    flush_drop_logs(widx, now);

    for (size_t g = 0; g < groups_.size(); ++g)
      groups_[g].last_bucket_loads = switch_.bucket_loads(static_cast<int>(g));
    switch_.take_report(now - window_ticks_, now);
    send_msg(MsgKind::ReqReport, kEndpointSwitch, kEndpointController, now,
             ctrl_ticks_, widx, 0);

    // Load queries to every live node (round trip traced; the samples the
    // decisions use are the same registry values, read synchronously).
    for (size_t g = 0; g < groups_.size(); ++g) {
      for (int h : groups_[g].actives)
        if (nodes_[static_cast<size_t>(h)]->alive())
          send_msg(MsgKind::ReqQuery, kEndpointController, h, now, ctrl_ticks_,
                   widx, 0);
      int s = groups_[g].standby;
      if (s >= 0 && nodes_[static_cast<size_t>(s)]->alive())
        send_msg(MsgKind::ReqQuery, kEndpointController, s, now, ctrl_ticks_,
                 widx, 0);
    }

    // Series points for the window that just closed.
    const WindowAgg agg = window_aggs_.count(widx) ? window_aggs_[widx]
                                                   : WindowAgg{};
    window_aggs_.erase(widx);
    Tick wstart = now - window_ticks_;
    if (agg.attacks > 0)
      metric(now, Series::detection_rate,
             static_cast<double>(agg.attacks_detected) /
                 static_cast<double>(agg.attacks));
    double usum = 0;
    int un = 0;
    int alive_actives = 0;
    for (size_t g = 0; g < groups_.size(); ++g) {
      for (int h : groups_[g].actives) {
        const MiddleboxNode& n = *nodes_[static_cast<size_t>(h)];
        if (!n.alive()) continue;
        ++alive_actives;
        if (n.serving_since() <= wstart) {
          usum += n.utilization_for_window(widx);
          ++un;
        }
      }
    }
    if (un > 0) metric(now, Series::utilization, usum / un);
    if (agg.delivered > 0)
      metric(now, Series::latency_ms,
             agg.latency_sum_ms / static_cast<double>(agg.delivered));
    metric(now, Series::throughput_rps,
           static_cast<double>(agg.delivered) /
               cfg_.timers.stats_report_period_s);
    if (alive_actives > 0)
      metric(now, Series::standby_ratio,
             static_cast<double>(groups_.size()) /
                 static_cast<double>(alive_actives));

    for (size_t g = 0; g < groups_.size(); ++g) evaluate_group(
        static_cast<int>(g), widx, now);
  }

  void evaluate_group(int g, int64_t widx, Tick now) {
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    // `>=`: a pipeline completing at this very tick runs after this close, so
    // the group's state is still pre-decision; skip until the next window.
    if (gr.pending_failures > 0 || gr.busy_until >= now) return;
    if (gr.actives.empty()) return;
    GroupPolicyInput in;
    in.active_count = static_cast<int>(gr.actives.size());
    in.max_active = cfg_.groups[static_cast<size_t>(g)].max_active;
    Tick wstart = now - window_ticks_;
    for (int h : gr.actives) {
      const MiddleboxNode& n = *nodes_[static_cast<size_t>(h)];
      if (!n.alive() || n.serving_since() > wstart) return;  // incomplete sample
      in.utils.push_back(n.utilization_for_window(widx));
      in.offered.push_back(n.offered_in_window(widx));
      in.capacity_per_window = n.capacity_per_window();
    }
    ScalingDecision d = plan_scaling(in, cfg_.policy);
    if (d.kind == ScaleKind::None) return;

    Pipeline p;
    p.group = g;
    p.decision = d;
    p.anchor = now;
    p.slot_handles = gr.actives;
    std::vector<int> cur = to_slots(gr, p.slot_handles);
    switch (d.kind) {
      case ScaleKind::Rebalance:
        p.kind_name = "rebalance";
        p.assign_slots = plan_rebalance(cur, gr.last_bucket_loads,
                                        in.active_count,
                                        in.capacity_per_window,
                                        cfg_.policy.imbalance_gap_threshold);
        p.completes = now + detect_ticks_ + gen_ticks_ + install_ticks_;
        break;
      case ScaleKind::ScaleOut: {
        p.kind_name = "scale_out";
        p.slot_handles.push_back(-1);
        p.assign_slots =
            plan_spread(gr.last_bucket_loads, in.active_count + 1);
        push(now + detect_ticks_ + gen_ticks_ + raw_create_ticks_,
             EvKind::NodeReady, static_cast<int>(pipelines_.size()), 0);
        p.completes = now + detect_ticks_ + gen_ticks_ + raw_create_ticks_ +
                      install_ticks_;
        break;
      }
      case ScaleKind::ScaleIn:
        p.kind_name = "scale_in";
        p.victim = gr.actives[static_cast<size_t>(d.victim_index)];
        p.assign_slots = plan_drain(cur, gr.last_bucket_loads, d.victim_index,
                                    in.active_count);
        p.completes = now + detect_ticks_ + gen_ticks_ + install_ticks_;
        break;
      case ScaleKind::None: return;
    }
    gr.busy_until = p.completes;
    finish_pipeline_setup(std::move(p));
  }

  std::vector<int> to_slots(const GroupRt& gr,
                            const std::vector<int>& slot_handles) {
    std::vector<int> slots(gr.assign.size(), -1);
    for (size_t b = 0; b < gr.assign.size(); ++b) {
      for (size_t s = 0; s < slot_handles.size(); ++s)
        if (slot_handles[s] == gr.assign[b]) {
          slots[b] = static_cast<int>(s);
          break;
        }
      if (slots[b] < 0)
        throw SimAbort("bucket assigned to a node outside the active set");
    }
    return slots;
  }

  void finish_pipeline_setup(Pipeline p) {
    int idx = static_cast<int>(pipelines_.size());
    // Rule install round trip: the release request lands when install ends.
    send_msg(MsgKind::ReqRelease, kEndpointController, kEndpointSwitch,
             p.completes - install_ticks_, install_ticks_, idx, 0);
    push(p.completes, EvKind::PipelineComplete, idx, 0);
    pipelines_.push_back(std::move(p));
  }

  // --- heartbeats and failure handling -----------------------------------------

  void on_heartbeat_tick(Tick now) {
    mesh_.tick(
        cfg_.timers.missed_heartbeats_for_failure,
        [&](int from, int to) {
          if (!nodes_[static_cast<size_t>(from)]->alive()) return;
          send_msg(MsgKind::ReqHeartbeat, from, to, now, ctrl_ticks_, from, 0);
        },
        [&](int from, int to) { on_heartbeat_declare(from, to, now); });
  }

  void on_heartbeat_declare(int from, int to, Tick now) {
    MiddleboxNode& fn = *nodes_[static_cast<size_t>(from)];
    MiddleboxNode& tn = *nodes_[static_cast<size_t>(to)];
    if (!fn.alive() || tn.alive()) return;
    int g = tn.ref().group;
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    elmd_.append(now, Severity::Warn, node_names_[static_cast<size_t>(from)],
                 LogKind::Fault,
                 "declared=" + node_names_[static_cast<size_t>(to)] +
                     " after=" +
                     std::to_string(cfg_.timers.missed_heartbeats_for_failure) +
                     "_missed_heartbeats");
    if (fn.is_standby() && gr.standby == from && !tn.ref().standby) {
      // Standby offers to take over the failed active.
      send_msg(MsgKind::ReqReplace, from, kEndpointController, now,
               replace_ticks_, to, from);
    }
  }

  void on_fault(int fidx, Tick now) {
    const FaultSpec& f = cfg_.faults[static_cast<size_t>(fidx)];
    FaultTarget tgt;
    parse_fault_target(f.target, &tgt);
    int g = cfg_.group_index(tgt.group);
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    int h = -1;
    if (tgt.random) {
      std::vector<int> alive;
      for (int a : gr.actives)
        if (nodes_[static_cast<size_t>(a)]->alive()) alive.push_back(a);
      if (alive.empty()) {
        elmd_.append(now, Severity::Warn, "controller", LogKind::Fault,
                     "fault_skipped=no_alive_active group=" + tgt.group);
        return;
      }
      h = alive[fault_rng_() % alive.size()];
    } else {
      NodeRef ref{g, tgt.ordinal, tgt.standby};
      auto it = handle_of_.find(pack_ref(ref));
      if (it == handle_of_.end() ||
          !nodes_[static_cast<size_t>(it->second)]->alive()) {
        elmd_.append(now, Severity::Warn, "controller", LogKind::Fault,
                     "fault_skipped=target_unavailable node=" + f.target);
        return;
      }
      h = it->second;
    }
    MiddleboxNode& node = *nodes_[static_cast<size_t>(h)];
    node.kill();
    fault_time_of_[h] = now;
    FailureAudit audit;
    audit.node = node_names_[static_cast<size_t>(h)];
    audit.fault_time = now;
    if (node.is_standby()) {
      audit.sessions_at_failure = node.standby_session_count();
    } else {
      audit.sessions_at_failure = static_cast<int64_t>(node.sessions().size());
      audit.pre_failure_keys = node.session_keys_sorted();
    }
    audit_of_[h] = static_cast<int>(result_.failure_audits.size());
    result_.failure_audits.push_back(std::move(audit));
    elmd_.append(now, Severity::Critical,
                 node_names_[static_cast<size_t>(h)], LogKind::Fault,
                 "fault=" + f.kind + " node=" +
                     node_names_[static_cast<size_t>(h)]);
    push(now + detect_ticks_, EvKind::FailureDetect, h, 0);
  }

  void on_failure_detect(int h, Tick now) {
    MiddleboxNode& node = *nodes_[static_cast<size_t>(h)];
    int g = node.ref().group;
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    if (node.is_standby()) {
      if (gr.standby != h) return;
      gr.standby = -1;
      gr.standby_reserved = false;
      mesh_.remove_peer(h);
      result_.failure_audits[static_cast<size_t>(audit_of_[h])].resolution =
          "standby-lost";
      result_.failure_audits[static_cast<size_t>(audit_of_[h])].resolved_time =
          now;
      elmd_.append(now, Severity::Warn, "controller", LogKind::Decision,
                   "action=standby_lost group=" +
                       cfg_.groups[static_cast<size_t>(g)].id +
                       " standby=" + node_names_[static_cast<size_t>(h)]);
      // Failures that were waiting on this standby escalate to node creation.
      std::vector<int> waiting;
      for (const auto& [fh, _] : gr.awaiting_replace) waiting.push_back(fh);
      gr.awaiting_replace.clear();
      for (int fh : waiting) start_emergency_create(g, fh, now);
      return;
    }
    if (failure_handled_.count(h)) return;
    failure_handled_.insert(h);
    ++gr.pending_failures;

    int64_t widx = now / window_ticks_ - 1;
    std::vector<int64_t> survivor_offered;
    for (int a : gr.actives) {
      if (a == h || !nodes_[static_cast<size_t>(a)]->alive()) continue;
      survivor_offered.push_back(
          nodes_[static_cast<size_t>(a)]->offered_in_window(widx));
    }
    int64_t failed_offered = node.offered_in_window(widx);
    bool absorbable =
        can_absorb_failed_load(survivor_offered, failed_offered,
                               node.capacity_per_window(),
                               cfg_.policy.overload_threshold);
    if (absorbable) {
      start_fail_rebalance(g, h, now);
    } else if (gr.standby >= 0 &&
               nodes_[static_cast<size_t>(gr.standby)]->alive() &&
               !gr.standby_reserved) {
      gr.standby_reserved = true;
      gr.awaiting_replace[h] = true;
      // The standby's own heartbeat verdict triggers the replace exchange.
    } else {
      start_emergency_create(g, h, now);
    }
  }

  void start_fail_rebalance(int g, int failed, Tick now) {
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    Pipeline p;
    p.group = g;
    p.kind_name = "rebalance";
    p.is_failure = true;
    p.anchor = fault_time_of_[failed];
    p.victim = failed;
    p.audit = audit_of_[failed];
    p.slot_handles = gr.actives;
    int victim_slot = slot_of(p.slot_handles, failed);
    std::vector<bool> allowed(p.slot_handles.size(), false);
    for (size_t s = 0; s < p.slot_handles.size(); ++s)
      allowed[s] =
          nodes_[static_cast<size_t>(p.slot_handles[s])]->alive();
    p.assign_slots =
        plan_drain(to_slots(gr, p.slot_handles), gr.last_bucket_loads,
                   victim_slot, static_cast<int>(p.slot_handles.size()),
                   &allowed);
    p.completes = now + gen_ticks_ + install_ticks_;
    p.sessions_lost =
        result_.failure_audits[static_cast<size_t>(p.audit)]
            .sessions_at_failure;
    finish_pipeline_setup(std::move(p));
  }

  void start_emergency_create(int g, int failed, Tick now) {
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    Pipeline p;
    p.group = g;
    p.kind_name = "create";
    p.is_failure = true;
    p.is_emergency = true;
    p.anchor = fault_time_of_[failed];
    p.victim = failed;
    p.audit = audit_of_[failed];
    p.slot_handles = gr.actives;
    p.slot_handles.push_back(-1);
    int victim_slot = slot_of(p.slot_handles, failed);
    p.assign_slots =
        plan_takeover(to_slots(gr, p.slot_handles), victim_slot,
                      static_cast<int>(p.slot_handles.size()) - 1);
    push(now + gen_ticks_ + raw_create_ticks_, EvKind::NodeReady,
         static_cast<int>(pipelines_.size()), 0);
    p.completes = now + gen_ticks_ + raw_create_ticks_ + install_ticks_;
    p.sessions_lost =
        result_.failure_audits[static_cast<size_t>(p.audit)]
            .sessions_at_failure;
    finish_pipeline_setup(std::move(p));
  }

  static int slot_of(const std::vector<int>& slot_handles, int h) {
    for (size_t s = 0; s < slot_handles.size(); ++s)
      if (slot_handles[s] == h) return static_cast<int>(s);
    throw SimAbort("node handle missing from its own group");
  }

  // --- protocol message handling -------------------------------------------------

  void on_msg(int idx) {
    Message& m = msgs_[static_cast<size_t>(idx)];
    if (m.receiver >= 0 &&
        !nodes_[static_cast<size_t>(m.receiver)]->alive()) {
      m.dropped = true;
      elmd_.append(m.deliver_time, Severity::Info, endpoint_name(m.receiver),
                   LogKind::Protocol,
                   std::string("dropped=") + msg_kind_name(m.kind) +
                       " from=" + endpoint_name(m.sender));
      return;
    }
    switch (m.kind) {
      case MsgKind::ReqHeartbeat:
        send_msg(MsgKind::ResHeartbeat, m.receiver, m.sender, m.deliver_time,
                 ctrl_ticks_, m.p1, 0);
        break;
      case MsgKind::ResHeartbeat:
        mesh_.on_response(static_cast<int>(m.p1), m.sender, m.deliver_time);
        break;
      case MsgKind::ReqQuery:
        send_msg(MsgKind::ResQuery, m.receiver, m.sender, m.deliver_time,
                 ctrl_ticks_, m.p1, 0);
        break;
      case MsgKind::ReqReport:
        send_msg(MsgKind::ResReport, m.receiver, m.sender, m.deliver_time,
                 ctrl_ticks_, m.p1, 0);
        break;
      case MsgKind::ReqRelease:
        send_msg(MsgKind::ResRelease, m.receiver, m.sender, m.deliver_time,
                 ctrl_ticks_, m.p1, 0);
        break;
      case MsgKind::ReqInform: on_inform(m); break;
      case MsgKind::ResInform: on_inform_ack(m); break;
      case MsgKind::ReqReplace: on_replace_request(m); break;
      case MsgKind::ResReplace: on_replace_response(m); break;
      case MsgKind::ResQuery:
      case MsgKind::ResReport:
      case MsgKind::ResRelease:
        break;
    }
  }

  void on_inform(const Message& m) {
    const StateUpdate& up = updates_[static_cast<size_t>(m.p1)];
    ImportResult r =
        nodes_[static_cast<size_t>(m.receiver)]->import_update(up);
    if (r == ImportResult::NeedSnapshot)
      elmd_.append(m.deliver_time, Severity::Warn,
                   endpoint_name(m.receiver), LogKind::Protocol,
                   "state_update_gap from=" + endpoint_name(m.sender) +
                       " snapshot_requested");
    send_msg(MsgKind::ResInform, m.receiver, m.sender, m.deliver_time,
             ctrl_ticks_, m.p1, r == ImportResult::Ok ? 1 : 0);
  }

  void on_inform_ack(const Message& m) {
    if (m.p2 != 0) return;  // acknowledged
    // The standby could not apply the delta; re-send the full table.
    MiddleboxNode& active = *nodes_[static_cast<size_t>(m.receiver)];
    GroupRt& gr = groups_[static_cast<size_t>(active.ref().group)];
    if (gr.standby < 0 || !nodes_[static_cast<size_t>(gr.standby)]->alive())
      return;
    StateUpdate up = active.export_full_snapshot();
    int uidx = static_cast<int>(updates_.size());
    updates_.push_back(std::move(up));
    send_msg(MsgKind::ReqInform, m.receiver, gr.standby, m.deliver_time,
             ctrl_ticks_, uidx, m.receiver);
  }

  void on_replace_request(const Message& m) {
    int failed = static_cast<int>(m.p1);
    int standby = static_cast<int>(m.p2);
    int g = nodes_[static_cast<size_t>(failed)]->ref().group;
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    if (!nodes_[static_cast<size_t>(standby)]->alive()) {
      // The offering standby died mid-exchange; fall back to node creation.
      if (gr.awaiting_replace.count(failed)) {
        gr.awaiting_replace.erase(failed);
        start_emergency_create(g, failed, m.deliver_time);
      }
      return;
    }
    bool accept = gr.awaiting_replace.count(failed) > 0;
    if (!accept && !failure_handled_.count(failed)) {
      // The standby's verdict beat the controller's own poll; accept.
      failure_handled_.insert(failed);
      ++gr.pending_failures;
      gr.standby_reserved = true;
      accept = true;
    } else if (accept) {
      gr.awaiting_replace.erase(failed);
    }
    if (!accept) {
      elmd_.append(m.deliver_time, Severity::Info, "controller",
                   LogKind::Protocol,
                   "replace_rejected failed=" + endpoint_name(failed) +
                       " standby=" + endpoint_name(standby) +
                       " reason=already_handled");
      send_msg(MsgKind::ResReplace, kEndpointController, standby,
               m.deliver_time, replace_ticks_, failed, 0);
      return;
    }
    send_msg(MsgKind::ResReplace, kEndpointController, standby, m.deliver_time,
             replace_ticks_, failed, 1);

    Pipeline p;
    p.group = g;
    p.kind_name = "switchover";
    p.is_failure = true;
    p.is_switchover = true;
    p.anchor = fault_time_of_[failed];
    p.victim = failed;
    p.added = standby;
    p.audit = audit_of_[failed];
    p.slot_handles = gr.actives;
    p.slot_handles.push_back(standby);
    int victim_slot = slot_of(p.slot_handles, failed);
    p.assign_slots =
        plan_takeover(to_slots(gr, p.slot_handles), victim_slot,
                      static_cast<int>(p.slot_handles.size()) - 1);
    p.completes = m.deliver_time + replace_ticks_ + install_ticks_;
    p.swrec.failed = node_names_[static_cast<size_t>(failed)];
    p.swrec.standby = node_names_[static_cast<size_t>(standby)];
    p.swrec.t_failure = fault_time_of_[failed];
    p.swrec.t_detect = m.send_time;
    p.swrec.t_replace_sent = m.send_time;
    pipeline_of_failed_[failed] = static_cast<int>(pipelines_.size());
    finish_pipeline_setup(std::move(p));
  }

  void on_replace_response(const Message& m) {
    int standby = m.receiver;
    int failed = static_cast<int>(m.p1);
    MiddleboxNode& s = *nodes_[static_cast<size_t>(standby)];
    GroupRt& gr = groups_[static_cast<size_t>(s.ref().group)];
    if (m.p2 == 0) {
      gr.standby_reserved = false;
      elmd_.append(m.deliver_time, Severity::Info,
                   endpoint_name(standby), LogKind::Protocol,
                   "stood_down failed=" + endpoint_name(failed));
      return;
    }
    int failed_ordinal = nodes_[static_cast<size_t>(failed)]->ref().ordinal;
    s.promote(failed_ordinal, m.deliver_time);
    gr.standby = -1;
    gr.standby_reserved = false;
    gr.actives.push_back(standby);
    mesh_.remove_peer(standby);  // re-paired when a new standby arrives
    auto it = pipeline_of_failed_.find(failed);
    if (it != pipeline_of_failed_.end()) {
      Pipeline& p = pipelines_[static_cast<size_t>(it->second)];
      p.sessions_lost =
          result_.failure_audits[static_cast<size_t>(p.audit)]
              .sessions_at_failure -
          static_cast<int64_t>(s.sessions().size());
    }
  }

  // --- pipeline completion --------------------------------------------------------

  void on_node_ready(int pidx, Tick now) {
    Pipeline& p = pipelines_[static_cast<size_t>(pidx)];
    GroupRt& gr = groups_[static_cast<size_t>(p.group)];
    int h = create_node(p.group, gr.next_ordinal++, false, now);
    p.added = h;
    for (int& s : p.slot_handles)
      if (s == -1) s = h;
    gr.actives.push_back(h);
    if (gr.standby >= 0 && nodes_[static_cast<size_t>(gr.standby)]->alive()) {
      mesh_.add_pair(h, gr.standby);
      mesh_.add_pair(gr.standby, h);
    }
    elmd_.append(now, Severity::Info, "controller", LogKind::Decision,
                 "node_provisioned=" + node_names_[static_cast<size_t>(h)] +
                     " group=" + cfg_.groups[static_cast<size_t>(p.group)].id);
  }

  void on_pipeline_complete(int pidx, Tick now) {
    Pipeline& p = pipelines_[static_cast<size_t>(pidx)];
    GroupRt& gr = groups_[static_cast<size_t>(p.group)];

    std::vector<int> new_assign(gr.assign.size());
    for (size_t b = 0; b < gr.assign.size(); ++b)
      new_assign[b] =
          p.slot_handles[static_cast<size_t>(p.assign_slots[b])];
    gr.assign = std::move(new_assign);
    install_assignments(now);

    double elapsed = ticks_to_seconds(now - p.anchor);
    const std::string gid = cfg_.groups[static_cast<size_t>(p.group)].id;

    if (!p.is_failure) {
      if (p.victim >= 0) destroy_active(p.group, p.victim);
      std::ostringstream pay;
      pay << "action=" << p.kind_name << " group=" << gid
          << " actives=" << gr.actives.size()
          << " trigger_max=" << format_double(p.decision.trigger_max)
          << " trigger_min=" << format_double(p.decision.trigger_min)
          << " trigger_mean=" << format_double(p.decision.trigger_mean)
          << " elapsed_s=" << format_double(elapsed);
      elmd_.append(now, Severity::Info, "controller", LogKind::Decision,
                   pay.str());
      result_.responses.push_back(
          ResponseRecord{gid, p.kind_name, now, elapsed});
      metric(now, Series::response_time_s, elapsed);
      return;
    }

    // Failure responses.
    --gr.pending_failures;
    destroy_active(p.group, p.victim);
    FailureAudit& audit =
        result_.failure_audits[static_cast<size_t>(p.audit)];
    audit.resolved_time = now;
    audit.sessions_lost = p.sessions_lost;
    counters_.sessions_lost_total += p.sessions_lost;
    result_.responses.push_back(ResponseRecord{gid, p.kind_name, now, elapsed});
    metric(now, Series::response_time_s, elapsed);
    metric(now, Series::sessions_lost, static_cast<double>(p.sessions_lost));

    if (p.is_switchover) {
      audit.resolution = "switchover";
      audit.post_switchover_keys =
          nodes_[static_cast<size_t>(p.added)]->session_keys_sorted();
      p.swrec.t_rules_installed = now;
      result_.switchovers.push_back(p.swrec);
      elmd_.append(now, Severity::Critical, "controller", LogKind::Switchover,
                   "standby=" + p.swrec.standby + " took_over=" +
                       p.swrec.failed + " elapsed_s=" + format_double(elapsed) +
                       " sessions_lost=" + std::to_string(p.sessions_lost));
      // Provision a replacement standby and re-sync every active's table.
      push(now + detect_ticks_ + gen_ticks_ + raw_create_ticks_ +
               install_ticks_,
           EvKind::StandbyReady, p.group, 0);
    } else if (p.is_emergency) {
      audit.resolution = "create";
      elmd_.append(now, Severity::Critical, "controller", LogKind::Decision,
                   "action=emergency_create group=" + gid + " node=" +
                       node_names_[static_cast<size_t>(p.added)] +
                       " replaces=" + audit.node + " elapsed_s=" +
                       format_double(elapsed) + " sessions_lost=" +
                       std::to_string(p.sessions_lost));
    } else {
      audit.resolution = "rebalance";
      elmd_.append(now, Severity::Warn, "controller", LogKind::Decision,
                   "action=failure_rebalance group=" + gid + " failed=" +
                       audit.node + " elapsed_s=" + format_double(elapsed) +
                       " sessions_lost=" + std::to_string(p.sessions_lost));
    }
  }

  void destroy_active(int g, int h) {
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    nodes_[static_cast<size_t>(h)]->kill();
    gr.actives.erase(std::remove(gr.actives.begin(), gr.actives.end(), h),
                     gr.actives.end());
    mesh_.remove_peer(h);
  }

  void on_standby_ready(int g, Tick now) {
    GroupRt& gr = groups_[static_cast<size_t>(g)];
    if (gr.standby >= 0) return;
    int h = create_node(g, gr.next_standby_ordinal++, true, now);
    gr.standby = h;
    for (int a : gr.actives) {
      MiddleboxNode& an = *nodes_[static_cast<size_t>(a)];
      if (!an.alive()) continue;
      mesh_.add_pair(a, h);
      mesh_.add_pair(h, a);
      StateUpdate up = an.export_full_snapshot();
      int uidx = static_cast<int>(updates_.size());
      updates_.push_back(std::move(up));
      send_msg(MsgKind::ReqInform, a, h, now, ctrl_ticks_, uidx, a);
    }
    elmd_.append(now, Severity::Info, "controller", LogKind::Decision,
                 "standby_provisioned=" + node_names_[static_cast<size_t>(h)] +
                     " group=" + cfg_.groups[static_cast<size_t>(g)].id);
  }

  // --- rules ------------------------------------------------------------------

  void install_assignments(Tick now) {
    AssignmentPlan plan;
    plan.by_group.resize(groups_.size());
    for (size_t g = 0; g < groups_.size(); ++g) {
      plan.by_group[g].resize(static_cast<size_t>(buckets_));
      for (int b = 0; b < buckets_; ++b) {
        int h = groups_[g].assign[static_cast<size_t>(b)];
        plan.by_group[g][static_cast<size_t>(b)] =
            nodes_[static_cast<size_t>(h)]->ref();
      }
    }
    RuleSet rs = compile(cfg_, plan);
    RuleDelta delta = diff(installed_, rs);
    if (!delta.empty()) {
      switch_.apply_delta(delta, [&](uint64_t key) {
        elmd_.append(now, Severity::Warn, "vswitch", LogKind::Protocol,
                     "remove_missing_rule key=" + std::to_string(key));
      });
      installed_ = std::move(rs);
    }
  }

  // --- teardown ---------------------------------------------------------------

  void finish() {
    for (auto it = agg_drops_.begin(); it != agg_drops_.end();) {
      Tick stamp = std::min(duration_ticks_,
                            (std::get<0>(it->first) + 1) * window_ticks_);
      elmd_.append(stamp, Severity::Info, std::get<1>(it->first),
                   LogKind::Drop,
                   "reason=" + std::get<2>(it->first) +
                       " count=" + std::to_string(it->second));
      it = agg_drops_.erase(it);
    }
    result_.counters = counters_;
    result_.logs = elmd_.records();
    result_.messages = std::move(msgs_);
    for (size_t g = 0; g < groups_.size(); ++g) {
      int alive = 0;
      for (int h : groups_[g].actives)
        if (nodes_[static_cast<size_t>(h)]->alive()) ++alive;
      result_.final_actives[cfg_.groups[g].id] = alive;
      int s = groups_[g].standby;
      result_.final_standbys[cfg_.groups[g].id] =
          (s >= 0 && nodes_[static_cast<size_t>(s)]->alive()) ? 1 : 0;
    }
    result_.rules_dump = switch_.dump(cfg_);
  }

  // --- state ------------------------------------------------------------------

  const ScenarioConfig& cfg_;
  Tick window_ticks_ = 0, hb_ticks_ = 0, ctrl_ticks_ = 0, replace_ticks_ = 0;
  Tick detect_ticks_ = 0, gen_ticks_ = 0, install_ticks_ = 0;
  Tick raw_create_ticks_ = 0, duration_ticks_ = 0;
  double per_hop_ms_ = 0, ssl_ms_ = 0, baseline_ms_ = 0;
  int buckets_ = 0;

  std::priority_queue<Ev, std::vector<Ev>, EvAfter> queue_;
  uint64_t seq_ = 0;
  uint64_t scheduled_ = 0;

  std::vector<std::unique_ptr<MiddleboxNode>> nodes_;
  std::unordered_map<uint64_t, int> handle_of_;
  std::vector<std::string> node_names_;
  std::vector<GroupRt> groups_;
  std::vector<std::vector<int>> svc_chain_groups_;
  std::vector<WorkloadRt> workloads_;
  std::vector<Pipeline> pipelines_;
  std::vector<Message> msgs_;
  std::vector<StateUpdate> updates_;

  VSwitch switch_;
  RuleSet installed_;
  HeartbeatMesh mesh_;
  ElmdStore elmd_;
  std::mt19937_64 fault_rng_;

  std::map<int64_t, WindowAgg> window_aggs_;
  std::map<std::tuple<int64_t, std::string, std::string>, int64_t> agg_drops_;
  std::map<int, Tick> fault_time_of_;
  std::map<int, int> audit_of_;
  std::map<int, int> pipeline_of_failed_;
  std::unordered_set<int> failure_handled_;

  SimCounters counters_;
  SimResult result_;
};

}  // namespace

SimResult run_simulation(const ScenarioConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

}  // namespace secchain
