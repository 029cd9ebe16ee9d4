#pragma once

#include <compare>
#include <vector>

#include "blemesh/engine.hpp"
#include "blemesh/metrics.hpp"

namespace blemesh {

/// Response a receiver gives to a session PDU. Perm/Temp distinction only
/// matters for path construction; data always acks.
enum class LinkResponse { Ack, NackPerm, NackTemp };

enum class PacketKind {
  Data,          // application payload, uplink or downlink (ack rides as Data)
  Gsa,           // path-construction message
  RoutingAck,    // network-level ack, travels the visited path in reverse
  RoutingNack,   // network-level nack, one hop back to the message holder
  FailureNotice, // failure notification toward the packet origin
  Flood,         // flooding-baseline payload
};

enum class Direction { Uplink, Downlink };

/// Unique per (origin, path index); index order is the chronological order
/// of path creation.
struct RouteId {
  int origin = 0;
  int index = -1;

  bool valid() const { return index >= 0; }
  auto operator<=>(const RouteId&) const = default;
};

struct GsaMessage {
  RouteId route;
  int ttl = 0;
  int max_ttl = 0;
  std::vector<int> visited;  // ordered, origin first, no repeats
};

struct Packet {
  PacketKind kind = PacketKind::Data;
  int packet_id = 0;
  int origin = 0;
  int final_dest = 0;
  Direction dir = Direction::Uplink;
  SimTime gen_time{};
  bool needs_ack = false;
  bool is_app_ack = false;

  // routed-data fields
  RouteId route;
  int init_ttl = 0;
  int cur_ttl = 0;
  int last_hop = 0;

  // GSA / routing control
  GsaMessage gsa;
  std::vector<int> ack_path;  // RoutingAck: full visited path, head last

  // failure recovery
  std::vector<int> failed_nodes;
  bool hb_mode = false;
  SimTime failure_detected_at{-1};
  RecoveryMethodTag recovery_method = RecoveryMethodTag::None;
  int ref_packet_id = 0;          // FailureNotice: the data packet it refers to
  std::vector<Packet> carried;    // FailureNotice: the data riding back
  int x_hops = 0;
  int z_hops = 0;
  int failed_hop = 0;
  double predicted_hb_s = 0;
  double predicted_mp_s = 0;

  // flooding
  int flood_seq = 0;
  int flood_ttl = 0;
};

}  // namespace blemesh
