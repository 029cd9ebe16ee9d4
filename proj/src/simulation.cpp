#include "blemesh/simulation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace blemesh {

// ---- Node ----

Node::Node(Simulation& sim, const NodeSpec& spec, uint64_t master_seed)
    : sim_(sim), spec_(spec), id_(spec.id), is_head_(spec.role == NodeRole::Head) {
  const ScenarioConfig& cfg = sim.config();
  mac_ = std::make_unique<Mac>(
      sim.engine(), sim.medium(), id_, sim.mac_config(is_head_),
      RngStream(master_seed, static_cast<uint64_t>(id_)));
  mac_->set_callbacks(this);
  mac_->set_peer_lookup([&sim](int id) {
    Node* n = sim.node(id);
    return n ? &n->mac() : nullptr;
  });
  int idx = sim.medium().add_node(mac_.get(), spec.position);
  mac_->set_medium_index(idx);
  sim.medium().set_powered(idx, false);

  discovery_ = std::make_unique<DiscoveryAgent>(
      sim.engine(), id_, is_head_, SimTime::sec(cfg.discovery_timer_s));

  gsa_ = std::make_unique<GsaAgent>(
      sim.engine(), id_, is_head_,
      GsaConfig{sim.head_id(), cfg.num_paths, cfg.max_ttl_cap});
  gsa_->send = [this](int dest, Packet p) { mac_->enqueue(dest, std::move(p)); };
  gsa_->neighbor_table = [this]() -> const std::map<int, NeighborEntry>& {
    return discovery_->neighbors();
  };
  gsa_->my_hop = [this] { return hop(); };
  gsa_->on_path_complete = [this](const RoutingEntry& e,
                                  const std::vector<int>& path) {
    remember_path_len(e.route, static_cast<int>(path.size()));
  };
  gsa_->on_construction_done = [this, &sim](int built) {
    paths_built = built;
    allphase_delay_s = sim.engine().now().seconds();
  };

  flood_ = std::make_unique<FloodingAgent>(
      sim.engine(), id_,
      FloodingConfig{cfg.flood_ttl, SimTime::sec(cfg.broadcast_timer_s),
                     static_cast<size_t>(cfg.flood_cache_capacity)});
  flood_->send = [this](int dest, Packet p) { mac_->enqueue(dest, std::move(p)); };
  flood_->on_deliver = [this](const Packet& p) { deliver_here(p); };
}

void Node::wake(SimTime t) {
  mac_->power_on(t);
  // With preinstalled routes the nodes run duty-cycled: advertising keeps
  // them reachable, scanning happens on demand (pending jobs, rediscovery).
  if (sim_.discovery_enabled()) {
    mac_->start_continuous_scan();
    discovery_->start();
  }
}

void Node::kill() { mac_->power_off(); }

bool Simulation::node_alive(int id) {
  Node* n = node(id);
  return n && n->mac().powered();
}

int Node::hop() const {
  if (is_head_) return 0;
  if (preset_hop_ >= 0) return preset_hop_;
  return discovery_->my_hop();
}

AdvPayload Node::current_adv_payload() {
  AdvPayload p;
  p.sender = id_;
  p.hop = std::min(hop(), kUnknownHop);
  return p;
}

void Node::on_adv_received(const AdvPayload& adv, double rssi_db) {
  discovery_->on_adv(adv, rssi_db);
}

LinkResponse Node::on_packet(const Packet& pkt, int from) {
  switch (pkt.kind) {
    case PacketKind::Gsa:
    case PacketKind::RoutingAck:
    case PacketKind::RoutingNack:
      return gsa_->handle_packet(pkt, from);
    case PacketKind::Flood:
      return flood_->handle_packet(pkt, from);
    case PacketKind::FailureNotice:
      return on_failure_notice(pkt);
    case PacketKind::Data:
      return on_data(pkt, from);
  }
  return LinkResponse::Ack;
}

void Node::deliver_here(const Packet& pkt) {
  sim_.note_delivered(pkt);
  if (!pkt.is_app_ack && pkt.needs_ack && pkt.final_dest == id_)
    sim_.make_app_ack(pkt);
}

LinkResponse Node::on_data(const Packet& pkt, int from) {
  if (pkt.final_dest == id_) {
    if (is_head_) gsa_->deactivate_older(pkt.origin, pkt.route.index);
    deliver_here(pkt);
    return LinkResponse::Ack;
  }
  Packet fwd = pkt;
  fwd.last_hop = from;
  int next = -1;
  if (pkt.hb_mode) {
    RoutingEntry* e = gsa_->find_route(pkt.route);
    bool tail_ok = e && e->active && e->upstream > 0 && e->upstream != from &&
                   std::find(pkt.failed_nodes.begin(), pkt.failed_nodes.end(),
                             e->upstream) == pkt.failed_nodes.end();
    if (tail_ok) {
      next = e->upstream;
      e->downstream = from;
      fwd.hb_mode = false;  // back on the surviving part of the path
    } else {
      auto ex = hb_exclusions(fwd);
      auto pick = select_next_hop(discovery_->neighbors(), kUnknownHop, ex);
      if (!pick) {
        start_multipath({fwd});
        return LinkResponse::Ack;
      }
      next = *pick;
      gsa_->install_route(RoutingEntry{pkt.route, next, from, true});
    }
  } else {
    RoutingEntry* e = gsa_->find_route(pkt.route);
    if (e) next = pkt.dir == Direction::Uplink ? e->upstream : e->downstream;
    if (next < 0) {
      sim_.note_undeliverable(fwd);
      return LinkResponse::Ack;
    }
  }
  forward_data(fwd, next);
  return LinkResponse::Ack;
}

void Node::forward_data(Packet pkt, int next) {
  pkt.cur_ttl -= 1;
  mac_->enqueue(next, std::move(pkt));
}

void Node::send_app_packet(Packet pkt) {
  if (sim_.use_flooding()) {
    flood_->originate(std::move(pkt));
    return;
  }
  if (is_head_) {
    // downlink along the path the data came in on
    RoutingEntry* e = gsa_->find_route(pkt.route);
    if (!e || e->downstream < 0) {
      sim_.note_undeliverable(pkt);
      return;
    }
    pkt.last_hop = -1;
    forward_data(std::move(pkt), e->downstream);
    return;
  }
  const RoutingEntry* chosen = nullptr;
  for (const auto& [rid, e] : gsa_->routes()) {
    if (rid.origin == id_ && e.active && e.downstream < 0) {
      chosen = &e;
      break;  // chronological order: lowest surviving index first
    }
  }
  if (!chosen) {
    sim_.note_undeliverable(pkt);
    return;
  }
  pkt.route = chosen->route;
  pkt.init_ttl = pkt.cur_ttl = path_len_[chosen->route];
  pkt.dir = Direction::Uplink;
  pkt.last_hop = -1;
  forward_data(std::move(pkt), chosen->upstream);
}

LinkResponse Node::on_failure_notice(const Packet& pkt) {
  RoutingEntry* e = gsa_->find_route(pkt.route);
  gsa_->invalidate_route(pkt.route);
  if (pkt.route.origin == id_) {
    origin_resend(pkt.carried);
    return LinkResponse::Ack;
  }
  if (!e || e->downstream < 0) {
    for (const auto& p : pkt.carried) sim_.note_undeliverable(p);
    return LinkResponse::Ack;
  }
  mac_->enqueue(e->downstream, pkt);
  return LinkResponse::Ack;
}

void Node::on_send_outcome(const Packet& pkt, int to, LinkResponse r) {
  gsa_->handle_send_outcome(pkt, to, r);
}

void Node::on_link_failure(int dest, std::vector<Packet> undelivered) {
  discovery_->forget(dest);
  gsa_->handle_link_failure(dest, undelivered);
  std::vector<Packet> data;
  for (auto& p : undelivered) {
    switch (p.kind) {
      case PacketKind::Data:
        if (p.is_app_ack)
          break;  // downlink ack lost, the data itself already arrived
        data.push_back(std::move(p));
        break;
      case PacketKind::FailureNotice:
        for (const auto& c : p.carried) sim_.note_undeliverable(c);
        break;
      case PacketKind::RoutingAck:
      case PacketKind::RoutingNack:
        // Route bookkeeping must not silently vanish on a congested link:
        // downstream nodes already committed their entries, so keep trying.
        if (sim_.node_alive(dest)) mac_->enqueue(dest, p);
        break;
      default:
        break;
    }
  }
  if (!data.empty()) handle_data_link_failure(dest, std::move(data));
}

void Node::handle_data_link_failure(int dest, std::vector<Packet> pkts) {
  RecoveryParams rp = sim_.recovery_params();
  SimTime now = sim_.engine().now();
  for (auto& p : pkts) {
    p.cur_ttl += 1;  // back in this node's custody
    if (p.failure_detected_at.ticks < 0) {
      p.failure_detected_at = now;
      p.x_hops = p.init_ttl - p.cur_ttl + 1;
      p.z_hops = p.init_ttl;
      p.failed_hop = p.z_hops - p.x_hops;
      p.predicted_hb_s = hb_latency_s(rp, p.z_hops, p.x_hops);
      p.predicted_mp_s = mp_latency_s(rp, p.z_hops, p.x_hops);
    }
    p.failed_nodes.push_back(dest);
  }
  RecoveryMethodTag method = RecoveryMethodTag::MultiPath;
  switch (sim_.recovery_mode()) {
    case RecoveryMode::MpOnly:
      method = RecoveryMethodTag::MultiPath;
      break;
    case RecoveryMode::HbOnly:
      method = RecoveryMethodTag::HopDistance;
      break;
    case RecoveryMode::Adaptive:
      method = choose_recovery(rp, pkts[0].z_hops, pkts[0].x_hops);
      break;
  }
  if (method == RecoveryMethodTag::HopDistance &&
      pkts[0].dir == Direction::Uplink) {
    start_hopdistance(std::move(pkts), dest);
  } else {
    start_multipath(std::move(pkts));
  }
}

void Node::start_multipath(std::vector<Packet> pkts) {
  for (auto& p : pkts) {
    p.recovery_method = RecoveryMethodTag::MultiPath;
    p.hb_mode = false;
  }
  RouteId rid = pkts[0].route;
  RoutingEntry* e = gsa_->find_route(rid);
  gsa_->invalidate_route(rid);
  if (rid.origin == id_) {
    origin_resend(std::move(pkts));
    return;
  }
  if (!e || e->downstream < 0) {
    for (const auto& p : pkts) sim_.note_undeliverable(p);
    return;
  }
  Packet notice;
  notice.kind = PacketKind::FailureNotice;
  notice.origin = id_;
  notice.final_dest = rid.origin;
  notice.route = rid;
  notice.gen_time = sim_.engine().now();
  notice.failed_nodes = pkts[0].failed_nodes;
  notice.carried = std::move(pkts);
  mac_->enqueue(e->downstream, std::move(notice));
}

void Node::start_hopdistance(std::vector<Packet> pkts, int) {
  for (auto& p : pkts) {
    p.recovery_method = RecoveryMethodTag::HopDistance;
    p.hb_mode = true;
  }
  SimTime since = sim_.engine().now();
  SimTime fire = since + SimTime::sec(sim_.recovery_params().r_s);
  mac_->start_continuous_scan();  // the rediscovery window costs r of listening
  sim_.engine().schedule(
      fire, id_, EventKind::Generic, [this, pkts, since](SimTime) mutable {
        mac_->stop_continuous_scan();
        if (!mac_->powered()) return;
        auto ex = hb_exclusions(pkts[0]);
        auto pick = hb_select(discovery_->neighbors(), since, ex);
        if (!pick) {  // nothing rediscovered, fall back
          start_multipath(std::move(pkts));
          return;
        }
        RoutingEntry* e = gsa_->find_route(pkts[0].route);
        if (e) {
          e->upstream = *pick;
          e->active = true;
        } else {
          gsa_->install_route(
              RoutingEntry{pkts[0].route, *pick, pkts[0].last_hop, true});
        }
        for (auto& p : pkts) forward_data(p, *pick);
      });
}

std::set<int> Node::hb_exclusions(const Packet& pkt) const {
  std::set<int> ex(pkt.failed_nodes.begin(), pkt.failed_nodes.end());
  ex.insert(id_);
  if (pkt.last_hop > 0) ex.insert(pkt.last_hop);
  return ex;
}

void Node::origin_resend(std::vector<Packet> pkts) {
  const RoutingEntry* chosen = nullptr;
  for (const auto& [rid, e] : gsa_->routes()) {
    if (rid.origin == id_ && e.active && e.downstream < 0) {
      chosen = &e;
      break;
    }
  }
  if (!chosen) {
    for (const auto& p : pkts) sim_.note_undeliverable(p);
    return;
  }
  for (auto& p : pkts) {
    p.route = chosen->route;
    p.init_ttl = p.cur_ttl = path_len_[chosen->route];
    p.hb_mode = false;
    p.last_hop = -1;
    forward_data(p, chosen->upstream);
  }
}

// ---- Simulation ----

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(cfg), recovery_mode_(parse_recovery_mode(cfg.recovery_mode)) {
  if (cfg_.scenario == "case3") cfg_.topology = "chain";
  build();
}

RecoveryParams Simulation::recovery_params() const {
  return RecoveryParams{cfg_.rediscovery_s, cfg_.gamma_s, cfg_.alpha, cfg_.beta};
}

MacConfig Simulation::mac_config(bool is_head) const {
  MacConfig m;
  m.adv_interval = SimTime::us(static_cast<int64_t>(
      (is_head ? cfg_.head_adv_interval_ms : cfg_.adv_interval_ms) * 1000));
  m.adv_delay_max = SimTime::us(static_cast<int64_t>(cfg_.adv_delay_max_ms * 1000));
  m.scan_interval = SimTime::us(static_cast<int64_t>(cfg_.scan_interval_ms * 1000));
  m.failure_window = SimTime::sec(cfg_.failure_window_s);
  m.retx_limit = cfg_.retx_limit;
  m.loss_probability = cfg_.loss_probability;
  return m;
}

Node* Simulation::node(int id) {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : it->second;
}

void Simulation::build() {
  chan_ = ChannelParams{cfg_.f_mhz, cfg_.n_coeff, cfg_.floor_loss_db,
                        cfg_.pl_threshold_db, cfg_.floor_height_m};
  if (cfg_.topology == "building") {
    PaperTopologyOptions o;
    o.grid_spacing_m = cfg_.grid_spacing_m;
    o.row_spacing_m = cfg_.row_spacing_m;
    o.floor_height_m = cfg_.floor_height_m;
    o.node_height_m = cfg_.node_height_m;
    specs_ = generate_paper_topology(o);
  } else if (cfg_.topology == "chain") {
    ChainTopologyOptions o;
    o.chains = cfg_.chain_lanes;
    o.levels = cfg_.chain_levels;
    o.level_spacing_m = cfg_.chain_level_spacing_m;
    o.lane_spacing_m = cfg_.chain_lane_spacing_m;
    specs_ = generate_chain_topology(o);
  } else {
    throw std::runtime_error("unknown topology: " + cfg_.topology);
  }
  validate_topology(specs_);
  graph_ = connectivity_graph(specs_, chan_);
  hops_ = bfs_hops(specs_, graph_);
  medium_ = std::make_unique<Medium>(eng_, chan_);
  medium_->set_collisions_enabled(cfg_.collisions);
  head_id_ = -1;
  source_id_ = -1;
  for (const auto& s : specs_) {
    if (s.role == NodeRole::Head && head_id_ < 0) head_id_ = s.id;
    source_id_ = std::max(source_id_, s.id);
  }
  for (const auto& s : specs_) {
    nodes_.push_back(std::make_unique<Node>(*this, s, cfg_.seed));
    by_id_[s.id] = nodes_.back().get();
    nodes_.back()->flooding().set_neighbors(graph_[s.id]);
  }
}

void Simulation::preinstall_routes() {
  std::map<int, int> idx_of;
  for (size_t i = 0; i < specs_.size(); ++i) idx_of[specs_[i].id] = static_cast<int>(i);
  auto rssi = [&](int a, int b) {
    return -medium_->link_loss_db(idx_of[a], idx_of[b]);
  };
  std::vector<int> origins;
  if (cfg_.scenario == "case3") {
    origins.push_back(source_id_);
  } else {
    for (const auto& s : specs_)
      if (s.role != NodeRole::Head) origins.push_back(s.id);
  }
  for (auto& n : nodes_) {
    auto it = hops_.find(n->id());
    n->preset_hop(it == hops_.end() ? kUnknownHop : it->second);
    for (int nb : graph_[n->id()]) {
      NeighborEntry e;
      e.id = nb;
      e.hop = hops_.count(nb) ? hops_[nb] : kUnknownHop;
      e.rssi_db = rssi(n->id(), nb);
      n->discovery().seed_neighbor(e);
    }
  }
  for (int origin : origins) {
    if (!hops_.count(origin)) continue;
    auto paths = offline_gsa(graph_, hops_, origin, head_id_, cfg_.num_paths,
                             cfg_.max_ttl_cap, rssi);
    Node* src = node(origin);
    src->paths_built = static_cast<int>(paths.size());
    for (size_t i = 0; i < paths.size(); ++i) {
      const auto& path = paths[i];  // origin ... head
      RouteId rid{origin, static_cast<int>(i)};
      src->remember_path_len(rid, static_cast<int>(path.size()) - 1);
      for (size_t j = 0; j < path.size(); ++j) {
        RoutingEntry e;
        e.route = rid;
        e.upstream = j + 1 < path.size() ? path[j + 1] : -1;
        e.downstream = j > 0 ? path[j - 1] : -1;
        node(path[j])->gsa().install_route(e);
      }
    }
    if (cfg_.scenario == "case3" && !paths.empty()) {
      // remember path 1 for failure placement
      case3_path1_ = paths[0];
    }
  }
}

void Simulation::schedule_traffic() {
  traffic_start_ = SimTime::sec(cfg_.traffic_start_s);
  std::vector<int> sources;
  if (cfg_.scenario == "case2") {
    for (const auto& s : specs_)
      if (s.role != NodeRole::Head) sources.push_back(s.id);
  } else if (cfg_.scenario == "case3") {
    sources.push_back(source_id_);
  }
  AckPolicy ack = parse_ack_policy(cfg_.ack);
  for (int src : sources) {
    RngStream trng(cfg_.seed, 700000ULL + static_cast<uint64_t>(src));
    for (int k = 0; k < cfg_.packets_per_source; ++k) {
      SimTime t = traffic_start_ +
                  SimTime::sec(k * cfg_.packet_interval_s) +
                  trng.uniform_duration(SimTime::ms(1000));
      bool want_ack = ack.mode == AckPolicy::Mode::All ||
                      (ack.mode == AckPolicy::Mode::Prob &&
                       trng.uniform() < ack.p);
      eng_.schedule(t, src, EventKind::PacketArrival,
                    [this, src, want_ack](SimTime now) {
                      Node* n = node(src);
                      if (!n || !n->mac().powered()) return;
                      Packet p;
                      p.kind = PacketKind::Data;
                      p.origin = src;
                      p.final_dest = head_id_;
                      p.dir = Direction::Uplink;
                      p.gen_time = now;
                      p.needs_ack = want_ack;
                      p.packet_id = register_packet(p);
                      n->send_app_packet(std::move(p));
                    });
    }
  }
}

void Simulation::schedule_failure() {
  if (case3_path1_.empty()) return;
  int z = static_cast<int>(case3_path1_.size()) - 1;  // origin hop count
  int j = z - cfg_.failed_hop;
  if (j <= 0 || j >= z) throw std::runtime_error("failed_hop out of path");
  int victim = case3_path1_[j];
  eng_.schedule(SimTime::sec(cfg_.failure_time_s), victim, EventKind::Generic,
                [this, victim](SimTime) { node(victim)->kill(); });
}

int Simulation::register_packet(const Packet& pkt) {
  int id = next_packet_id_++;
  PacketKpi k;
  k.packet_id = id;
  k.origin = pkt.origin;
  k.dest = pkt.final_dest;
  k.gen_s = eng_.now().seconds();
  pkts_[id] = k;
  return id;
}

void Simulation::note_delivered(const Packet& pkt) {
  if (pkt.is_app_ack) {
    auto it = pkts_.find(pkt.ref_packet_id);
    if (it != pkts_.end())
      it->second.latency_s = eng_.now().seconds() - it->second.gen_s;
    return;
  }
  auto it = pkts_.find(pkt.packet_id);
  if (it == pkts_.end()) return;
  PacketKpi& k = it->second;
  if (k.delivered) return;
  k.delivered = true;
  k.delivery_s = eng_.now().seconds();
  if (!pkt.needs_ack) k.latency_s = k.delivery_s - k.gen_s;
  k.method = pkt.recovery_method;
  k.x_hops = pkt.x_hops;
  k.z_hops = pkt.z_hops;
  k.failed_hop = pkt.failed_hop;
  if (pkt.failure_detected_at.ticks >= 0) {
    k.recovery_latency_s =
        (eng_.now() - pkt.failure_detected_at).seconds();
    k.predicted_hb_s = pkt.predicted_hb_s;
    k.predicted_mp_s = pkt.predicted_mp_s;
  }
}

void Simulation::note_undeliverable(const Packet& pkt) {
  if (pkt.is_app_ack) return;
  auto it = pkts_.find(pkt.packet_id);
  if (it == pkts_.end() || it->second.delivered) return;
  it->second.undeliverable = true;
}

void Simulation::make_app_ack(const Packet& data) {
  Node* h = node(head_id_);
  Packet ack;
  ack.kind = use_flooding() ? PacketKind::Flood : PacketKind::Data;
  ack.is_app_ack = true;
  ack.ref_packet_id = data.packet_id;
  ack.origin = head_id_;
  ack.final_dest = data.origin;
  ack.dir = Direction::Downlink;
  ack.route = data.route;
  ack.init_ttl = ack.cur_ttl = data.init_ttl;
  ack.gen_time = eng_.now();
  h->send_app_packet(std::move(ack));
}

RunKpis Simulation::run() {
  bool case1 = cfg_.scenario == "case1";
  if (!case1) preinstall_routes();
  if (case1 && !use_flooding()) {
    for (auto& up : nodes_) {
      Node* n = up.get();
      n->discovery().on_complete = [this, n] {
        n->discovery_delay_s = eng_.now().seconds();
        if (n->is_head()) {
          n->paths_built = 0;
          n->allphase_delay_s = eng_.now().seconds();
        } else {
          n->gsa().build_paths(cfg_.num_paths);
        }
      };
    }
  }
  // staggered wakeups
  for (auto& up : nodes_) {
    RngStream wrng(cfg_.seed, 500000ULL + static_cast<uint64_t>(up->id()));
    SimTime t = wrng.uniform_duration(SimTime::ms(1000));
    Node* n = up.get();
    eng_.schedule(t, n->id(), EventKind::Generic,
                  [n](SimTime now) { n->wake(now); });
  }
  schedule_traffic();
  if (cfg_.scenario == "case3") schedule_failure();
  SimTime end = SimTime::sec(cfg_.duration_s);
  eng_.run_until(end);
  return collect();
}

RunKpis Simulation::collect() {
  SimTime end = SimTime::sec(cfg_.duration_s);
  RunKpis out;
  out.scenario = cfg_.scenario;
  out.seed = cfg_.seed;
  out.protocol = cfg_.protocol;
  for (const auto& [id, k] : pkts_) {
    out.packets.push_back(k);
    if (k.undeliverable) out.undeliverable_count++;
  }
  SimTime win_from{0}, win_to = end;
  if (cfg_.scenario != "case1") {
    win_from = traffic_start_;
    win_to = std::min(end, traffic_start_ + SimTime::sec(cfg_.energy_window_s));
  }
  EnergyModel energy{cfg_.voltage_v, cfg_.tx_ma, cfg_.rx_ma, cfg_.idle_ma,
                     cfg_.sleep_ma};
  for (auto& up : nodes_) {
    Node& n = *up;
    if (n.mac().ledger().started()) n.mac().ledger().finish(end);
    NodeKpi k;
    k.node_id = n.id();
    k.avg_power_mw = n.mac().ledger().average_power_mw(energy, win_from, win_to);
    k.energy_mj = n.mac().ledger().energy_mj(energy, win_from, win_to);
    k.tx_count = n.mac().tx_count();
    k.adv_tx_count = n.mac().adv_tx_count();
    k.discovery_delay_s = n.discovery_delay_s;
    k.allphase_delay_s = n.allphase_delay_s;
    k.paths_built = n.paths_built;
    k.isolated = !n.is_head() && n.hop() >= kUnknownHop;
    out.nodes.push_back(k);
  }
  return out;
}

std::string Simulation::dump_routes() const {
  std::ostringstream os;
  for (const auto& up : nodes_) {
    for (const auto& [rid, e] : up->gsa().routes()) {
      if (e.downstream >= 0 || rid.origin != up->id()) continue;
      os << "route " << rid.origin << "." << rid.index << ":";
      int cur = rid.origin;
      const RoutingEntry* entry = &e;
      os << " " << cur;
      while (entry && entry->upstream >= 0) {
        cur = entry->upstream;
        os << " -> " << cur;
        auto it = by_id_.find(cur);
        entry = it == by_id_.end()
                    ? nullptr
                    : const_cast<Node*>(it->second)->gsa().find_route(rid);
      }
      os << (e.active ? " [active]" : " [inactive]") << "\n";
    }
  }
  return os.str();
}

}  // namespace blemesh
