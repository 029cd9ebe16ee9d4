#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "blemesh/discovery.hpp"
#include "blemesh/metrics.hpp"

namespace blemesh {

enum class RecoveryMode { MpOnly, HbOnly, Adaptive };

RecoveryMode parse_recovery_mode(const std::string& s);  // "mp" | "hb" | "adaptive"
const char* to_string(RecoveryMode m);

struct RecoveryParams {
  double r_s = 2.3;      // rediscovery scan window paid by the hop-distance method
  double gamma_s = 0.5;  // per-hop forwarding delay
  double alpha = 0;      // hop-distance tuning offset
  double beta = 0;       // multi-path tuning offset
};

/// Z: path length origin to head. X: hops already travelled when the dead
/// link was hit (detector included).
double hb_latency_s(const RecoveryParams& p, int z, int x);
double mp_latency_s(const RecoveryParams& p, int z, int x);

/// X above this picks hop-distance; at or below (ties included) multi-path.
double hb_threshold_x(const RecoveryParams& p);

RecoveryMethodTag choose_recovery(const RecoveryParams& p, int z, int x);

/// Post-rediscovery pick: lowest hop count among neighbors heard since
/// `since`, excluding the dead candidates; ties by RSSI then id.
std::optional<int> hb_select(const std::map<int, NeighborEntry>& table,
                             SimTime since, const std::set<int>& excluded);

}  // namespace blemesh
