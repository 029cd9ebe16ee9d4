#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "blemesh/routing.hpp"

using namespace blemesh;

namespace {

NeighborEntry entry(int id, int hop, double rssi = -60) {
  NeighborEntry e;
  e.id = id;
  e.hop = hop;
  e.rssi_db = rssi;
  return e;
}

// All simple origin->head paths on a small graph.
void all_paths(const std::map<int, std::vector<int>>& adj, int node, int head,
               std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (node == head) {
    out.push_back(cur);
    return;
  }
  for (int n : adj.at(node)) {
    if (std::find(cur.begin(), cur.end(), n) != cur.end()) continue;
    cur.push_back(n);
    all_paths(adj, n, head, cur, out);
    cur.pop_back();
  }
}

bool disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 1; i + 1 < a.size(); ++i)
    for (size_t j = 1; j + 1 < b.size(); ++j)
      if (a[i] == b[j]) return false;
  return true;
}

// Largest pairwise intermediate-disjoint subset, by exhaustive search.
size_t max_disjoint(const std::vector<std::vector<int>>& paths) {
  size_t best = 0;
  size_t n = paths.size();
  for (size_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<size_t> pick;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) pick.push_back(i);
    bool ok = true;
    for (size_t i = 0; i < pick.size() && ok; ++i)
      for (size_t j = i + 1; j < pick.size() && ok; ++j)
        ok = disjoint(paths[pick[i]], paths[pick[j]]);
    if (ok) best = std::max(best, pick.size());
  }
  return best;
}

std::map<int, int> hops_of(const std::map<int, std::vector<int>>& adj,
                           int head) {
  std::map<int, int> h;
  h[head] = 0;
  std::vector<int> q{head};
  for (size_t i = 0; i < q.size(); ++i)
    for (int n : adj.at(q[i]))
      if (!h.count(n)) {
        h[n] = h[q[i]] + 1;
        q.push_back(n);
      }
  return h;
}

// Contention-free distributed run: agents exchange packets through the
// engine with ideal links, so the outcome should replay the offline search.
struct GsaNet {
  Engine eng;
  std::map<int, std::vector<int>> adj;
  std::map<int, int> hops;
  std::map<int, std::map<int, NeighborEntry>> tables;
  std::map<int, std::unique_ptr<GsaAgent>> agents;
  std::vector<std::vector<int>> completed;  // origin-side, head included
  int done_with = -1;

  GsaNet(std::map<int, std::vector<int>> a, int head, int k) : adj(std::move(a)) {
    hops = hops_of(adj, head);
    GsaConfig cfg;
    cfg.head_id = head;
    cfg.num_paths = k;
    for (const auto& [id, nbrs] : adj) {
      for (int n : nbrs) tables[id][n] = entry(n, hops.at(n));
      agents[id] =
          std::make_unique<GsaAgent>(eng, id, id == head, cfg);
    }
    for (const auto& [id, nbrs] : adj) {
      GsaAgent* ag = agents[id].get();
      int self = id;
      ag->neighbor_table = [this, self]() -> const std::map<int, NeighborEntry>& {
        return tables[self];
      };
      ag->my_hop = [this, self] { return hops.at(self); };
      ag->send = [this, self](int dest, Packet pkt) {
        eng.schedule(eng.now() + SimTime::ms(1), dest, EventKind::DataRx,
                     [this, self, dest, pkt](SimTime) {
                       LinkResponse r = agents[dest]->handle_packet(pkt, self);
                       agents[self]->handle_send_outcome(pkt, dest, r);
                     });
      };
      ag->on_path_complete = [this](const RoutingEntry&,
                                    const std::vector<int>& path) {
        completed.push_back(path);
      };
      ag->on_construction_done = [this](int built) { done_with = built; };
    }
  }

  void build(int origin, int k) {
    agents[origin]->build_paths(k);
    eng.run_until(SimTime::sec(600));
  }
};

}  // namespace

TEST_CASE("select_next_hop budget, exclusion and tie-breaks") {
  std::map<int, NeighborEntry> t;
  t[2] = entry(2, 1, -70);
  t[3] = entry(3, 1, -50);
  t[4] = entry(4, 2, -40);

  CHECK(!select_next_hop(t, 1, {}).has_value());  // hop must be < budget
  auto pick = select_next_hop(t, 2, {});
  REQUIRE(pick.has_value());
  CHECK(*pick == 3);  // hop tie, stronger rssi
  pick = select_next_hop(t, 2, {3});
  REQUIRE(pick.has_value());
  CHECK(*pick == 2);
  pick = select_next_hop(t, 3, {2, 3});
  REQUIRE(pick.has_value());
  CHECK(*pick == 4);
  CHECK(!select_next_hop(t, 3, {2, 3, 4}).has_value());

  t[3].rssi_db = -70;  // full tie resolves to the lower id
  pick = select_next_hop(t, 2, {});
  REQUIRE(pick.has_value());
  CHECK(*pick == 2);
}

TEST_CASE("offline search on the diamond graph") {
  std::map<int, std::vector<int>> adj{
      {1, {2, 3}}, {2, {1, 4}}, {3, {1, 4}}, {4, {2, 3}}};
  auto hops = hops_of(adj, 1);
  auto paths = offline_gsa(adj, hops, 4, 1, 3, 16);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == std::vector<int>{4, 2, 1});
  CHECK(paths[1] == std::vector<int>{4, 3, 1});

  std::vector<std::vector<int>> enumerated;
  std::vector<int> cur{4};
  all_paths(adj, 4, 1, cur, enumerated);
  CHECK(paths.size() == max_disjoint(enumerated));
}

TEST_CASE("direct origin-head hop is used once, later paths go around") {
  std::map<int, std::vector<int>> adj{{1, {2, 3}}, {2, {1, 3}}, {3, {1, 2}}};
  auto hops = hops_of(adj, 1);
  auto paths = offline_gsa(adj, hops, 2, 1, 3, 16);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == std::vector<int>{2, 1});
  CHECK(paths[1] == std::vector<int>{2, 3, 1});
}

TEST_CASE("offline search stops when no disjoint path remains") {
  // o(4) - a(2) - head, plus a spur c(3) that can only rejoin through a
  std::map<int, std::vector<int>> adj{
      {1, {2}}, {2, {1, 3, 4}}, {3, {2, 4}}, {4, {2, 3}}};
  auto hops = hops_of(adj, 1);
  auto paths = offline_gsa(adj, hops, 4, 1, 5, 16);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0] == std::vector<int>{4, 2, 1});

  std::vector<std::vector<int>> enumerated;
  std::vector<int> cur{4};
  all_paths(adj, 4, 1, cur, enumerated);
  CHECK(max_disjoint(enumerated) == 1);
}

TEST_CASE("offline search on a three-level graph matches the enumeration") {
  std::map<int, std::vector<int>> adj{{1, {2, 3}},    {2, {1, 4}},
                                      {3, {1, 4, 5}}, {4, {2, 3, 6}},
                                      {5, {3, 6}},    {6, {4, 5}}};
  auto hops = hops_of(adj, 1);
  auto paths = offline_gsa(adj, hops, 6, 1, 3, 16);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == std::vector<int>{6, 4, 2, 1});
  CHECK(paths[1] == std::vector<int>{6, 5, 3, 1});

  std::vector<std::vector<int>> enumerated;
  std::vector<int> cur{6};
  all_paths(adj, 6, 1, cur, enumerated);
  CHECK(paths.size() == max_disjoint(enumerated));
  // the first path is a shortest one
  size_t shortest = 1000;
  for (const auto& p : enumerated) shortest = std::min(shortest, p.size());
  CHECK(paths[0].size() == shortest);
}

TEST_CASE("distributed construction replays the offline search") {
  std::vector<std::map<int, std::vector<int>>> graphs{
      {{1, {2, 3}}, {2, {1, 4}}, {3, {1, 4}}, {4, {2, 3}}},
      {{1, {2, 3}}, {2, {1, 3}}, {3, {1, 2}}},
      {{1, {2}}, {2, {1, 3, 4}}, {3, {2, 4}}, {4, {2, 3}}},
      {{1, {2, 3}},
       {2, {1, 4}},
       {3, {1, 4, 5}},
       {4, {2, 3, 6}},
       {5, {3, 6}},
       {6, {4, 5}}},
  };
  std::vector<int> origins{4, 2, 4, 6};
  for (size_t g = 0; g < graphs.size(); ++g) {
    GsaNet net(graphs[g], 1, 5);
    net.build(origins[g], 5);
    auto expected = offline_gsa(graphs[g], net.hops, origins[g], 1, 5, 16);
    REQUIRE(net.done_with == static_cast<int>(expected.size()));
    REQUIRE(net.completed.size() == expected.size());
    for (size_t i = 0; i < expected.size(); ++i) {
      // origin-side completion carries the visited list, head excluded
      std::vector<int> want(expected[i].begin(), expected[i].end() - 1);
      CHECK(net.completed[i] == want);
    }
  }
}

TEST_CASE("distributed construction commits entries along the path") {
  std::map<int, std::vector<int>> adj{{1, {2, 3}},    {2, {1, 4}},
                                      {3, {1, 4, 5}}, {4, {2, 3, 6}},
                                      {5, {3, 6}},    {6, {4, 5}}};
  GsaNet net(adj, 1, 2);
  net.build(6, 2);
  REQUIRE(net.completed.size() == 2);

  // relay 4 carries route 6.0 with the right directions
  RoutingEntry* e = net.agents[4]->find_route(RouteId{6, 0});
  REQUIRE(e != nullptr);
  CHECK(e->upstream == 2);
  CHECK(e->downstream == 6);
  CHECK(e->active);

  // origin end and head end terminate the chain
  RoutingEntry* o = net.agents[6]->find_route(RouteId{6, 0});
  REQUIRE(o != nullptr);
  CHECK(o->downstream == -1);
  RoutingEntry* h = net.agents[1]->find_route(RouteId{6, 0});
  REQUIRE(h != nullptr);
  CHECK(h->upstream == -1);
  CHECK(h->downstream == 2);
}

TEST_CASE("route table edits") {
  Engine eng;
  GsaAgent a(eng, 5, false, GsaConfig{});
  a.install_route(RoutingEntry{RouteId{5, 0}, 2, -1, true});
  a.install_route(RoutingEntry{RouteId{5, 1}, 3, -1, true});
  a.install_route(RoutingEntry{RouteId{7, 0}, 2, 9, true});

  REQUIRE(a.find_route(RouteId{5, 0}) != nullptr);
  CHECK(a.find_route(RouteId{5, 2}) == nullptr);

  a.invalidate_route(RouteId{5, 0});
  CHECK(!a.find_route(RouteId{5, 0})->active);
  CHECK(a.find_route(RouteId{5, 1})->active);

  // data on index 1 retires index 0 for the same origin only
  a.install_route(RoutingEntry{RouteId{5, 0}, 2, -1, true});
  a.deactivate_older(5, 1);
  CHECK(!a.find_route(RouteId{5, 0})->active);
  CHECK(a.find_route(RouteId{5, 1})->active);
  CHECK(a.find_route(RouteId{7, 0})->active);
}
