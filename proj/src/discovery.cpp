#include "blemesh/discovery.hpp"

#include <algorithm>

namespace blemesh {

DiscoveryAgent::DiscoveryAgent(Engine& eng, int node_id, bool is_head,
                               SimTime expiry)
    : eng_(eng), id_(node_id), expiry_(expiry), my_hop_(is_head ? 0 : kUnknownHop) {}

void DiscoveryAgent::start() {
  started_ = true;
  started_at_ = eng_.now();
}

void DiscoveryAgent::arm_timer() {
  eng_.cancel(timer_);
  timer_ = eng_.schedule(eng_.now() + expiry_, id_, EventKind::TimerDiscovery,
                         [this](SimTime t) {
                           complete_ = true;
                           completed_at_ = t;
                           if (on_complete) on_complete();
                         });
}

void DiscoveryAgent::on_adv(const AdvPayload& adv, double rssi_db) {
  if (adv.hop == kUnknownHop) return;  // sender knows nothing yet

  auto it = table_.find(adv.sender);
  bool news = it == table_.end() || it->second.last_payload != adv;

  NeighborEntry& e = table_[adv.sender];
  e.id = adv.sender;
  e.hop = adv.hop;
  e.rssi_db = rssi_db;
  e.last_seen = eng_.now();
  e.last_payload = adv;

  if (my_hop_ != 0) my_hop_ = std::min(my_hop_, adv.hop + 1);

  if (started_ && !complete_ && news) arm_timer();
}

}  // namespace blemesh
