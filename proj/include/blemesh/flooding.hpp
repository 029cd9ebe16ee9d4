#pragma once

#include <deque>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "blemesh/engine.hpp"
#include "blemesh/packet.hpp"

namespace blemesh {

struct FloodingConfig {
  int ttl = 127;
  SimTime broadcast_timer = SimTime::ms(1500);
  size_t cache_capacity = 64;
};

/// Controlled-flooding baseline. Every node relays unseen packets to all of
/// its neighbors over the same unicast link layer, after a coalescing timer
/// so several pending packets ride one round of sessions. A bounded
/// (origin, seq) cache suppresses re-floods.
class FloodingAgent {
 public:
  FloodingAgent(Engine& eng, int node_id, FloodingConfig cfg)
      : eng_(eng), id_(node_id), cfg_(cfg) {}

  std::function<void(int dest, Packet)> send;
  std::function<void(const Packet&)> on_deliver;  // reached final_dest here

  void set_neighbors(std::vector<int> n) { neighbors_ = std::move(n); }
  const std::vector<int>& neighbors() const { return neighbors_; }

  /// Stamps flood fields on a locally generated packet and queues it.
  void originate(Packet pkt);

  LinkResponse handle_packet(const Packet& pkt, int from);

 private:
  bool seen(int origin, int seq) const;
  void remember(int origin, int seq);
  void enqueue_flood(const Packet& pkt, int exclude);
  void on_timer();

  Engine& eng_;
  int id_;
  FloodingConfig cfg_;
  std::vector<int> neighbors_;
  int next_seq_ = 1;
  std::deque<std::pair<int, int>> cache_;  // insertion order, oldest first
  std::set<std::pair<int, int>> cache_index_;
  std::vector<std::pair<Packet, int>> buffer_;  // packet, neighbor to skip
  bool timer_armed_ = false;
};

}  // namespace blemesh
