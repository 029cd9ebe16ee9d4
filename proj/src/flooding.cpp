#include "blemesh/flooding.hpp"

namespace blemesh {

bool FloodingAgent::seen(int origin, int seq) const {
  return cache_index_.count({origin, seq}) > 0;
}

void FloodingAgent::remember(int origin, int seq) {
  if (seen(origin, seq)) return;
  cache_.emplace_back(origin, seq);
  cache_index_.insert({origin, seq});
  while (cache_.size() > cfg_.cache_capacity) {
    cache_index_.erase(cache_.front());
    cache_.pop_front();
  }
}

void FloodingAgent::originate(Packet pkt) {
  pkt.kind = PacketKind::Flood;
  pkt.origin = id_;
  pkt.flood_seq = next_seq_++;
  pkt.flood_ttl = cfg_.ttl;
  remember(pkt.origin, pkt.flood_seq);
  enqueue_flood(pkt, -1);
}

void FloodingAgent::enqueue_flood(const Packet& pkt, int exclude) {
  if (pkt.flood_ttl <= 0) return;
  buffer_.emplace_back(pkt, exclude);
  if (!timer_armed_) {
    timer_armed_ = true;
    eng_.schedule(eng_.now() + cfg_.broadcast_timer, id_,
                  EventKind::TimerBroadcast, [this](SimTime) { on_timer(); });
  }
}

void FloodingAgent::on_timer() {
  timer_armed_ = false;
  auto batch = std::move(buffer_);
  buffer_.clear();
  for (int n : neighbors_) {
    for (const auto& [pkt, exclude] : batch) {
      if (n == exclude) continue;
      send(n, pkt);
    }
  }
}

LinkResponse FloodingAgent::handle_packet(const Packet& pkt, int from) {
  if (seen(pkt.origin, pkt.flood_seq)) return LinkResponse::Ack;
  remember(pkt.origin, pkt.flood_seq);
  if (pkt.final_dest == id_) {
    if (on_deliver) on_deliver(pkt);
    return LinkResponse::Ack;
  }
  Packet fwd = pkt;
  fwd.flood_ttl -= 1;
  enqueue_flood(fwd, from);
  return LinkResponse::Ack;
}

}  // namespace blemesh
