#pragma once

#include <functional>
#include <map>

#include "blemesh/channel.hpp"
#include "blemesh/engine.hpp"

namespace blemesh {

constexpr int kUnknownHop = 0xFF;

struct NeighborEntry {
  int id = 0;
  int hop = kUnknownHop;   // neighbor's distance to the head, in hops
  double rssi_db = -200;   // last seen
  SimTime last_seen{};
  AdvPayload last_payload;
};

/// Hop-count discovery driven by overheard advertisements. Advertisements
/// from nodes that do not know their own hop count yet carry no information
/// and are dropped. The expiry timer arms on the first informative
/// advertisement and re-arms whenever one brings news (unknown sender, or a
/// sender whose content changed); when it finally runs out the local view
/// has settled and discovery is declared complete.
class DiscoveryAgent {
 public:
  DiscoveryAgent(Engine& eng, int node_id, bool is_head, SimTime expiry);

  void start();
  void on_adv(const AdvPayload& adv, double rssi_db);

  int my_hop() const { return my_hop_; }
  bool complete() const { return complete_; }
  SimTime started_at() const { return started_at_; }
  SimTime completed_at() const { return completed_at_; }
  const std::map<int, NeighborEntry>& neighbors() const { return table_; }

  /// Forgets a neighbor (node believed dead); hop count keeps its value.
  void forget(int id) { table_.erase(id); }

  /// Installs a table entry directly (preprovisioned scenarios).
  void seed_neighbor(const NeighborEntry& e) { table_[e.id] = e; }

  std::function<void()> on_complete;

 private:
  void arm_timer();

  Engine& eng_;
  int id_;
  SimTime expiry_;
  bool started_ = false;
  bool complete_ = false;
  int my_hop_;
  SimTime started_at_{};
  SimTime completed_at_{};
  std::map<int, NeighborEntry> table_;
  EventHandle timer_;
};

}  // namespace blemesh
