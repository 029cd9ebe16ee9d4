#include "blemesh/routing.hpp"

#include <algorithm>

namespace blemesh {

namespace {
constexpr int kBudgetRetries = 4;
constexpr SimTime kBudgetRetryDelay = SimTime::sec(2);
}  // namespace

std::optional<int> select_next_hop(const std::map<int, NeighborEntry>& table,
                                   int ttl_budget,
                                   const std::set<int>& excluded) {
  std::optional<int> best;
  int best_hop = 0;
  double best_rssi = 0;
  for (const auto& [id, e] : table) {
    if (e.hop >= ttl_budget) continue;
    if (excluded.count(id)) continue;
    if (!best || e.hop < best_hop ||
        (e.hop == best_hop && e.rssi_db > best_rssi)) {
      best = id;
      best_hop = e.hop;
      best_rssi = e.rssi_db;
    }
  }
  return best;
}

GsaAgent::GsaAgent(Engine& eng, int node_id, bool is_head, GsaConfig cfg)
    : eng_(eng), id_(node_id), is_head_(is_head), cfg_(cfg) {}

RoutingEntry* GsaAgent::find_route(RouteId id) {
  auto it = routes_.find(id);
  return it == routes_.end() ? nullptr : &it->second;
}

void GsaAgent::invalidate_route(RouteId id) {
  auto it = routes_.find(id);
  if (it != routes_.end()) it->second.active = false;
}

void GsaAgent::deactivate_older(int origin, int index) {
  for (auto& [rid, e] : routes_)
    if (rid.origin == origin && rid.index < index) e.active = false;
}

bool GsaAgent::on_previous_path(int origin) const {
  for (const auto& [rid, e] : routes_)
    if (rid.origin == origin) return true;
  return false;
}

std::set<int> GsaAgent::excluded_for(const GsaMessage& msg) const {
  std::set<int> ex(msg.visited.begin(), msg.visited.end());
  ex.insert(id_);
  int origin = msg.route.origin;
  auto pit = perm_.find(origin);
  if (pit != perm_.end()) ex.insert(pit->second.begin(), pit->second.end());
  auto tit = temp_.find(origin);
  if (tit != temp_.end()) {
    for (const auto& [id, tag] : tit->second)
      if (tag == msg.max_ttl) ex.insert(id);  // older tags expired on escalation
  }
  return ex;
}

void GsaAgent::build_paths(int count) {
  build_ = BuildState{};
  build_.want = count;
  build_.in_progress = true;
  start_next_path();
}

void GsaAgent::start_next_path() {
  if (build_.next_index >= build_.want || my_hop() >= kUnknownHop) {
    build_.in_progress = false;
    if (on_construction_done) on_construction_done(build_.next_index);
    return;
  }
  build_.max_ttl = my_hop();
  build_.retries_left = kBudgetRetries;
  lf_blamed_.clear();
  RouteId rid{id_, build_.next_index};
  GsaMessage msg{rid, build_.max_ttl, build_.max_ttl, {id_}};
  pending_[rid] = PendingGsa{msg, -1, -1};
  reselect(rid);
}

void GsaAgent::escalate() {
  // Temporary refusals are not topology facts: a first hop that timed out
  // was busy, not absent, and a neighbor that could not reach the head had
  // a momentarily stale table. For the first path a hop-decreasing chain is
  // guaranteed to exist at the initial budget, so retry the same budget
  // after a pause instead of settling for a longer path; for later paths
  // only link-layer timeouts earn a retry, escalation is how they grow.
  if (build_.retries_left > 0 &&
      (build_.next_index == 0 || !lf_blamed_.empty())) {
    build_.retries_left--;
    auto& t = temp_[id_];
    if (build_.next_index == 0) {
      for (auto it = t.begin(); it != t.end();)
        it = it->second == build_.max_ttl ? t.erase(it) : std::next(it);
    } else {
      for (int b : lf_blamed_) t.erase(b);
    }
    lf_blamed_.clear();
    int attempt = build_.next_index;
    int budget = build_.max_ttl;
    eng_.schedule(eng_.now() + kBudgetRetryDelay, id_, EventKind::Generic,
                  [this, attempt, budget](SimTime) {
                    if (!build_.in_progress || build_.next_index != attempt ||
                        build_.max_ttl != budget)
                      return;
                    RouteId rid{id_, attempt};
                    GsaMessage msg{rid, budget, budget, {id_}};
                    pending_[rid] = PendingGsa{msg, -1, -1};
                    reselect(rid);
                  });
    return;
  }
  lf_blamed_.clear();
  build_.retries_left = kBudgetRetries;
  build_.max_ttl++;
  if (build_.max_ttl > cfg_.max_ttl_cap) {
    build_.in_progress = false;
    if (on_construction_done) on_construction_done(build_.next_index);
    return;
  }
  RouteId rid{id_, build_.next_index};
  GsaMessage msg{rid, build_.max_ttl, build_.max_ttl, {id_}};
  pending_[rid] = PendingGsa{msg, -1, -1};
  reselect(rid);
}

void GsaAgent::forward(const RouteId& rid) {
  const PendingGsa& p = pending_.at(rid);
  Packet pkt;
  pkt.kind = PacketKind::Gsa;
  pkt.origin = rid.origin;
  pkt.final_dest = cfg_.head_id;
  pkt.route = rid;
  pkt.gen_time = eng_.now();
  pkt.gsa = p.msg;
  send(p.target, pkt);
}

void GsaAgent::reselect(const RouteId& rid) {
  auto it = pending_.find(rid);
  if (it == pending_.end()) return;
  PendingGsa& p = it->second;
  auto next = select_next_hop(neighbor_table(), p.msg.ttl, excluded_for(p.msg));
  if (next) {
    p.target = *next;
    forward(rid);
    return;
  }
  int upstream = p.upstream;
  pending_.erase(it);
  if (upstream < 0) {
    escalate();
  } else {
    send_routing_nack(rid, upstream);
  }
}

void GsaAgent::send_routing_nack(const RouteId& rid, int to) {
  Packet pkt;
  pkt.kind = PacketKind::RoutingNack;
  pkt.origin = rid.origin;
  pkt.final_dest = to;
  pkt.route = rid;
  pkt.gen_time = eng_.now();
  send(to, pkt);
}

LinkResponse GsaAgent::handle_packet(const Packet& pkt, int from) {
  switch (pkt.kind) {
    case PacketKind::Gsa:
      return handle_gsa(pkt, from);
    case PacketKind::RoutingAck:
      handle_routing_ack(pkt);
      return LinkResponse::Ack;
    case PacketKind::RoutingNack:
      handle_routing_nack(pkt, from);
      return LinkResponse::Ack;
    default:
      return LinkResponse::Ack;
  }
}

LinkResponse GsaAgent::handle_gsa(const Packet& pkt, int from) {
  int origin = pkt.gsa.route.origin;
  if (is_head_) {
    // A direct origin-head hop is allowed once; later paths must go around.
    if (pkt.gsa.visited.size() == 1 && on_previous_path(origin))
      return LinkResponse::NackPerm;
    RoutingEntry e;
    e.route = pkt.gsa.route;
    e.upstream = -1;
    e.downstream = pkt.gsa.visited.back();
    routes_[e.route] = e;
    Packet ack;
    ack.kind = PacketKind::RoutingAck;
    ack.origin = origin;
    ack.final_dest = origin;
    ack.route = pkt.gsa.route;
    ack.gen_time = eng_.now();
    ack.ack_path = pkt.gsa.visited;
    send(e.downstream, ack);
    return LinkResponse::Ack;
  }
  if (on_previous_path(origin)) return LinkResponse::NackPerm;
  if (neighbor_table().empty()) return LinkResponse::NackPerm;
  GsaMessage m = pkt.gsa;
  m.ttl -= 1;
  m.visited.push_back(id_);
  auto next = select_next_hop(neighbor_table(), m.ttl, excluded_for(m));
  if (!next) return LinkResponse::NackTemp;  // nothing reachable at this budget
  pending_[m.route] = PendingGsa{m, from, *next};
  forward(m.route);
  return LinkResponse::Ack;
}

void GsaAgent::handle_routing_ack(const Packet& pkt) {
  const auto& path = pkt.ack_path;
  auto pos = std::find(path.begin(), path.end(), id_);
  if (pos == path.end()) return;
  size_t i = static_cast<size_t>(pos - path.begin());
  RoutingEntry e;
  e.route = pkt.route;
  e.upstream = i + 1 < path.size() ? path[i + 1] : cfg_.head_id;
  e.downstream = i > 0 ? path[i - 1] : -1;
  routes_[e.route] = e;
  pending_.erase(pkt.route);
  if (i > 0) {
    Packet fwd = pkt;
    fwd.gen_time = eng_.now();
    send(path[i - 1], fwd);
    return;
  }
  // origin: the whole path is known here, skip its members next time
  for (size_t j = 1; j < path.size(); ++j) perm_[id_].insert(path[j]);
  std::vector<int> full = path;
  if (on_path_complete) on_path_complete(e, full);
  if (build_.in_progress) {
    build_.next_index++;
    start_next_path();
  }
}

void GsaAgent::handle_routing_nack(const Packet& pkt, int from) {
  auto it = pending_.find(pkt.route);
  if (it == pending_.end() || it->second.target != from) return;
  temp_[pkt.route.origin][from] = it->second.msg.max_ttl;
  reselect(pkt.route);
}

void GsaAgent::handle_send_outcome(const Packet& pkt, int to, LinkResponse r) {
  if (pkt.kind != PacketKind::Gsa) return;
  auto it = pending_.find(pkt.gsa.route);
  if (it == pending_.end() || it->second.target != to) return;
  if (r == LinkResponse::Ack) return;  // custody transferred
  if (r == LinkResponse::NackPerm)
    perm_[pkt.gsa.route.origin].insert(to);
  else
    temp_[pkt.gsa.route.origin][to] = it->second.msg.max_ttl;
  reselect(pkt.gsa.route);
}

void GsaAgent::handle_link_failure(int dest,
                                   const std::vector<Packet>& undelivered) {
  for (const auto& pkt : undelivered) {
    if (pkt.kind != PacketKind::Gsa) continue;
    auto it = pending_.find(pkt.gsa.route);
    if (it == pending_.end() || it->second.target != dest) continue;
    temp_[pkt.gsa.route.origin][dest] = it->second.msg.max_ttl;
    if (pkt.gsa.route.origin == id_ && it->second.upstream < 0)
      lf_blamed_.insert(dest);
    reselect(pkt.gsa.route);
  }
}

// ---- offline replay ----

namespace {

struct OfflineCtx {
  const std::map<int, std::vector<int>>& adj;
  const std::map<int, int>& hops;
  const std::function<double(int, int)>& rssi;
  int head;
  std::set<int> used;  // intermediates of committed paths
  bool have_path = false;
};

bool offline_dfs(OfflineCtx& c, int node, int ttl, std::vector<int>& visited) {
  std::vector<int> cand;
  for (int n : c.adj.at(node)) {
    if (c.hops.at(n) >= ttl) continue;
    if (std::find(visited.begin(), visited.end(), n) != visited.end()) continue;
    if (c.used.count(n)) continue;
    if (n == c.head && visited.size() == 1 && c.have_path) continue;
    cand.push_back(n);
  }
  std::sort(cand.begin(), cand.end(), [&](int a, int b) {
    if (c.hops.at(a) != c.hops.at(b)) return c.hops.at(a) < c.hops.at(b);
    if (c.rssi) {
      double ra = c.rssi(node, a), rb = c.rssi(node, b);
      if (ra != rb) return ra > rb;
    }
    return a < b;
  });
  for (int n : cand) {
    visited.push_back(n);
    if (n == c.head) return true;
    if (offline_dfs(c, n, ttl - 1, visited)) return true;
    visited.pop_back();
  }
  return false;
}

}  // namespace

std::vector<std::vector<int>> offline_gsa(
    const std::map<int, std::vector<int>>& adjacency,
    const std::map<int, int>& hops, int origin, int head, int k,
    int max_ttl_cap, const std::function<double(int, int)>& rssi) {
  std::vector<std::vector<int>> paths;
  OfflineCtx c{adjacency, hops, rssi, head, {}, false};
  int base_ttl = hops.at(origin);
  if (base_ttl >= kUnknownHop) return paths;
  for (int i = 0; i < k; ++i) {
    std::vector<int> found;
    for (int ttl = base_ttl; ttl <= max_ttl_cap; ++ttl) {
      std::vector<int> visited{origin};
      if (offline_dfs(c, origin, ttl, visited)) {
        found = visited;
        break;
      }
    }
    if (found.empty()) break;
    paths.push_back(found);
    for (size_t j = 1; j + 1 < found.size(); ++j) c.used.insert(found[j]);
    c.have_path = true;
  }
  return paths;
}

}  // namespace blemesh
