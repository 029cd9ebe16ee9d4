#include "blemesh/recovery.hpp"

#include <stdexcept>

#include "blemesh/routing.hpp"

namespace blemesh {

RecoveryMode parse_recovery_mode(const std::string& s) {
  if (s == "mp") return RecoveryMode::MpOnly;
  if (s == "hb") return RecoveryMode::HbOnly;
  if (s == "adaptive") return RecoveryMode::Adaptive;
  throw std::runtime_error("bad recovery mode: " + s);
}

const char* to_string(RecoveryMode m) {
  switch (m) {
    case RecoveryMode::MpOnly: return "mp";
    case RecoveryMode::HbOnly: return "hb";
    case RecoveryMode::Adaptive: return "adaptive";
  }
  return "?";
}

double hb_latency_s(const RecoveryParams& p, int z, int x) {
  return p.r_s + p.gamma_s * (z - x + 1 + p.alpha);
}

double mp_latency_s(const RecoveryParams& p, int z, int x) {
  return p.gamma_s * (z + x - 1 + p.beta);
}

double hb_threshold_x(const RecoveryParams& p) {
  return (p.r_s / p.gamma_s + p.alpha + 2 - p.beta) / 2.0;
}

RecoveryMethodTag choose_recovery(const RecoveryParams& p, int z, int x) {
  return hb_latency_s(p, z, x) < mp_latency_s(p, z, x)
             ? RecoveryMethodTag::HopDistance
             : RecoveryMethodTag::MultiPath;
}

std::optional<int> hb_select(const std::map<int, NeighborEntry>& table,
                             SimTime since, const std::set<int>& excluded) {
  std::map<int, NeighborEntry> fresh;
  for (const auto& [id, e] : table) {
    if (e.last_seen >= since) fresh[id] = e;
  }
  return select_next_hop(fresh, kUnknownHop, excluded);
}

}  // namespace blemesh
