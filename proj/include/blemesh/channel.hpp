#pragma once

#include <cmath>
#include <vector>

#include "blemesh/engine.hpp"

namespace blemesh {

struct Position {
  double x = 0, y = 0, z = 0;
};

inline double distance(const Position& a, const Position& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

/// ITU indoor propagation parameters plus the neighbor decision threshold.
struct ChannelParams {
  double f_mhz = 2400.0;
  double n_coeff = 22.0;        // power-loss coefficient N
  double floor_loss_db = 6.0;   // Pf, per floor crossed
  double pl_threshold_db = 70.0;
  double floor_height_m = 4.0;
};

int floor_index(double z, double floor_height_m);

/// PL = 20 log10(f) + N log10(d) + Pf*n - 28, distance clamped to 1 m.
double path_loss_db(const Position& a, const Position& b,
                    const ChannelParams& p);

bool is_neighbor(const Position& a, const Position& b, const ChannelParams& p);

enum class FrameType { Advertisement, ConnRequest };

struct AdvNeighborDigest {
  int id;
  int hop;
  bool operator==(const AdvNeighborDigest&) const = default;
};

struct AdvPayload {
  int sender = 0;
  int hop = 0xFF;
  std::vector<AdvNeighborDigest> neighbors;  // capped digest of the 1-hop table
  bool operator==(const AdvPayload&) const = default;
};

struct Frame {
  FrameType type = FrameType::Advertisement;
  int sender = 0;
  int channel = 37;
  SimTime start{};
  SimTime end{};
  AdvPayload payload;
  int conn_target = 0;  // ConnRequest: the advertiser being answered
};

/// Receiver-side hooks the medium uses to decide delivery.
class MediumClient {
 public:
  virtual ~MediumClient() = default;
  /// True when the node listens on `channel` for the whole window (scan
  /// dwell covers it, no own transmission, not in a data session).
  virtual bool listening_on(int channel, SimTime start, SimTime end) const = 0;
  /// True when an advertiser accepts a connection request in this window.
  virtual bool conn_listening_on(int channel, SimTime start,
                                 SimTime end) const = 0;
  virtual void receive_frame(const Frame& f, double rssi_db) = 0;
};

/// Advertising-channel medium: range from the path-loss threshold,
/// destructive collisions with no capture. Data sessions bypass it.
class Medium {
 public:
  Medium(Engine& engine, ChannelParams params) : engine_(engine), params_(params) {}

  int add_node(MediumClient* client, const Position& pos);  // returns index
  void set_powered(int idx, bool on);

  /// Schedules delivery evaluation at f.end for every in-range receiver.
  void transmit(int sender_idx, Frame f);

  bool in_range(int a, int b) const { return reach_[a][b]; }
  double link_loss_db(int a, int b) const { return loss_[a][b]; }
  const ChannelParams& params() const { return params_; }
  void set_collisions_enabled(bool on) { collisions_ = on; }

 private:
  struct PastTx {
    int sender;
    int channel;
    SimTime start, end;
  };

  void deliver(const Frame& f, int sender_idx);

  Engine& engine_;
  ChannelParams params_;
  bool collisions_ = true;
  std::vector<MediumClient*> clients_;
  std::vector<Position> positions_;
  std::vector<bool> powered_;
  std::vector<std::vector<bool>> reach_;
  std::vector<std::vector<double>> loss_;
  std::vector<PastTx> history_;
};

}  // namespace blemesh
