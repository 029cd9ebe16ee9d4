#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "blemesh/discovery.hpp"
#include "blemesh/packet.hpp"

namespace blemesh {

/// One hop of a committed path, stored at every node the path crosses.
/// upstream points toward the head, downstream toward the origin; -1 means
/// the path ends here in that direction.
struct RoutingEntry {
  RouteId route;
  int upstream = -1;
  int downstream = -1;
  bool active = true;
};

struct GsaConfig {
  int head_id = 1;
  int num_paths = 5;
  int max_ttl_cap = 16;
};

/// Greedy candidate pick: lowest hop count strictly under the TTL budget,
/// ties broken by strongest RSSI then lowest id.
std::optional<int> select_next_hop(const std::map<int, NeighborEntry>& table,
                                   int ttl_budget,
                                   const std::set<int>& excluded);

/// Distributed greedy path construction. Each custody holder picks the
/// neighbor closest to the head within the TTL budget; refusals come back
/// as link-level nacks (permanent: already on a path of this origin;
/// temporary: nothing reachable at this budget) or as a routing nack when a
/// node accepted and only later ran out of options. The origin escalates
/// max TTL when a whole budget is exhausted, which also retires every
/// temporary exclusion tagged with the older budget.
class GsaAgent {
 public:
  GsaAgent(Engine& eng, int node_id, bool is_head, GsaConfig cfg);

  // wiring
  std::function<void(int dest, Packet)> send;
  std::function<const std::map<int, NeighborEntry>&()> neighbor_table;
  std::function<int()> my_hop;
  std::function<void(const RoutingEntry&, const std::vector<int>& path)>
      on_path_complete;                       // origin side, path excludes head
  std::function<void(int built)> on_construction_done;  // origin side

  /// Origin: build `count` disjoint paths toward the head.
  void build_paths(int count);

  LinkResponse handle_packet(const Packet& pkt, int from);
  void handle_send_outcome(const Packet& pkt, int to, LinkResponse r);
  void handle_link_failure(int dest, const std::vector<Packet>& undelivered);

  const std::map<RouteId, RoutingEntry>& routes() const { return routes_; }
  RoutingEntry* find_route(RouteId id);
  void install_route(const RoutingEntry& e) { routes_[e.route] = e; }
  void invalidate_route(RouteId id);
  /// Destination side: data on path `index` proves earlier paths are stale.
  void deactivate_older(int origin, int index);
  bool building() const { return build_.in_progress; }
  int paths_built() const { return build_.next_index; }

 private:
  struct PendingGsa {
    GsaMessage msg;   // visited already ends with this node, ttl already spent
    int upstream;     // custody source, -1 at the origin
    int target;       // current forward attempt
  };

  struct BuildState {
    int want = 0;
    int next_index = 0;
    int max_ttl = 0;
    int retries_left = 0;
    bool in_progress = false;
  };

  bool on_previous_path(int origin) const;
  std::set<int> excluded_for(const GsaMessage& msg) const;
  void start_next_path();
  void escalate();
  void forward(const RouteId& rid);
  void reselect(const RouteId& rid);
  void send_routing_nack(const RouteId& rid, int to);
  LinkResponse handle_gsa(const Packet& pkt, int from);
  void handle_routing_ack(const Packet& pkt);
  void handle_routing_nack(const Packet& pkt, int from);

  Engine& eng_;
  int id_;
  bool is_head_;
  GsaConfig cfg_;
  std::map<RouteId, RoutingEntry> routes_;
  std::map<RouteId, PendingGsa> pending_;
  std::map<int, std::set<int>> perm_;        // origin -> excluded ids
  std::map<int, std::map<int, int>> temp_;   // origin -> id -> max_ttl tag
  std::set<int> lf_blamed_;  // first hops lost to link failure this attempt
  BuildState build_;
};

/// Sequential replay of the distributed construction on a known graph:
/// iterative-deepening DFS with the same candidate ordering and the same
/// disjointness and direct-path rules. Paths are returned origin-first and
/// include the head. `rssi` breaks hop-count ties; pass nullptr for id order.
std::vector<std::vector<int>> offline_gsa(
    const std::map<int, std::vector<int>>& adjacency,
    const std::map<int, int>& hops, int origin, int head, int k,
    int max_ttl_cap, const std::function<double(int, int)>& rssi = nullptr);

}  // namespace blemesh
