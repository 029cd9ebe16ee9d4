#include "blemesh/channel.hpp"

#include <algorithm>

namespace blemesh {

int floor_index(double z, double floor_height_m) {
  return static_cast<int>(std::floor(z / floor_height_m + 1e-9));
}

double path_loss_db(const Position& a, const Position& b,
                    const ChannelParams& p) {
  double d = std::max(distance(a, b), 1.0);  // 1 m ITU reference distance
  int n = std::abs(floor_index(a.z, p.floor_height_m) -
                   floor_index(b.z, p.floor_height_m));
  return 20.0 * std::log10(p.f_mhz) + p.n_coeff * std::log10(d) +
         p.floor_loss_db * n - 28.0;
}

bool is_neighbor(const Position& a, const Position& b,
                 const ChannelParams& p) {
  return path_loss_db(a, b, p) <= p.pl_threshold_db;
}

int Medium::add_node(MediumClient* client, const Position& pos) {
  int idx = static_cast<int>(clients_.size());
  clients_.push_back(client);
  positions_.push_back(pos);
  powered_.push_back(true);
  for (auto& row : reach_) row.push_back(false);
  for (auto& row : loss_) row.push_back(0.0);
  reach_.emplace_back(clients_.size(), false);
  loss_.emplace_back(clients_.size(), 0.0);
  for (int j = 0; j < idx; ++j) {
    double pl = path_loss_db(positions_[idx], positions_[j], params_);
    loss_[idx][j] = loss_[j][idx] = pl;
    bool r = pl <= params_.pl_threshold_db;
    reach_[idx][j] = reach_[j][idx] = r;
  }
  loss_[idx][idx] = path_loss_db(pos, pos, params_);
  return idx;
}

void Medium::set_powered(int idx, bool on) { powered_[idx] = on; }

void Medium::transmit(int sender_idx, Frame f) {
  if (!powered_[sender_idx]) return;
  history_.push_back({sender_idx, f.channel, f.start, f.end});
  engine_.schedule(f.end, f.sender, EventKind::PacketArrival,
                   [this, f, sender_idx](SimTime) { deliver(f, sender_idx); });
}

void Medium::deliver(const Frame& f, int sender_idx) {
  // prune old history
  if (history_.size() > 4096) {
    SimTime cutoff{engine_.now().ticks - 1000000};
    size_t keep = 0;
    while (keep < history_.size() && history_[keep].end < cutoff) ++keep;
    history_.erase(history_.begin(), history_.begin() + keep);
  }
  for (int r = 0; r < static_cast<int>(clients_.size()); ++r) {
    if (r == sender_idx || !powered_[r] || !reach_[sender_idx][r]) continue;
    MediumClient* c = clients_[r];
    bool listening = f.type == FrameType::Advertisement
                         ? c->listening_on(f.channel, f.start, f.end)
                         : c->conn_listening_on(f.channel, f.start, f.end);
    if (!listening) continue;
    // Destructive collision, no capture: any other in-range transmission
    // overlapping the window on the same channel kills the reception.
    bool lost = false;
    if (collisions_) {
      for (const auto& tx : history_) {
        if (tx.channel != f.channel) continue;
        if (tx.sender == sender_idx && tx.start == f.start && tx.end == f.end)
          continue;  // the frame itself
        if (tx.sender == r) continue;  // own tx handled by listening_on
        if (tx.start < f.end && tx.end > f.start && reach_[tx.sender][r]) {
          lost = true;
          break;
        }
      }
    }
    if (!lost) c->receive_frame(f, -loss_[sender_idx][r]);
  }
}

}  // namespace blemesh
