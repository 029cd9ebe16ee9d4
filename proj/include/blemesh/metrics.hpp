#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blemesh/engine.hpp"

namespace blemesh {

enum class RadioState { Sleep, Rx, Tx, Idle };

const char* to_string(RadioState s);

/// Radio energy model: supply voltage and per-state current draw.
struct EnergyModel {
  double voltage_v = 3.3;
  double tx_ma = 7.3;
  double rx_ma = 6.5;    // scan / listen
  double idle_ma = 0.7;  // awake, radio off (turnarounds)
  double sleep_ma = 0.001;

  double current_ma(RadioState s) const;
  double power_mw(RadioState s) const { return current_ma(s) * voltage_v; }
};

/// Per-node, time-ordered radio-state timeline. States never overlap by
/// construction: each transition closes the previous interval.
class RadioLedger {
 public:
  void begin(SimTime t, RadioState s);
  void transition(SimTime t, RadioState s);
  void finish(SimTime t);

  /// Energy in millijoules over [from, to], clipped per interval.
  double energy_mj(const EnergyModel& m, SimTime from, SimTime to) const;
  /// Time-weighted mean power in mW over [from, to].
  double average_power_mw(const EnergyModel& m, SimTime from, SimTime to) const;
  /// Total time spent in state `s` over [from, to].
  SimTime state_time(RadioState s, SimTime from, SimTime to) const;
  /// Sum of all interval durations (energy-conservation check).
  SimTime total_time() const;

  bool started() const { return started_; }
  RadioState current() const { return current_; }

 private:
  struct Interval {
    RadioState state;
    SimTime start, end;
  };
  std::vector<Interval> intervals_;
  bool started_ = false;
  RadioState current_ = RadioState::Sleep;
  SimTime since_{0};
};

enum class RecoveryMethodTag { None, MultiPath, HopDistance };

const char* to_string(RecoveryMethodTag m);

struct PacketKpi {
  int packet_id = 0;
  int origin = 0;
  int dest = 0;
  double gen_s = 0;
  bool delivered = false;
  double delivery_s = 0;
  double latency_s = 0;  // end to end, including the ack when one is required
  bool undeliverable = false;
  // failure-recovery context (case3)
  RecoveryMethodTag method = RecoveryMethodTag::None;
  int x_hops = 0;        // failure to origin
  int z_hops = 0;        // head to origin
  int failed_hop = 0;    // failed node's hop-count from the head
  double recovery_latency_s = 0;  // failure declaration to delivery
  double predicted_hb_s = 0;
  double predicted_mp_s = 0;
};

struct NodeKpi {
  int node_id = 0;
  double avg_power_mw = 0;
  double energy_mj = 0;
  long tx_count = 0;      // data/control packets transmitted (incl. retx)
  long adv_tx_count = 0;  // advertisement transmissions
  double discovery_delay_s = -1;  // -1 when not applicable
  double allphase_delay_s = -1;
  int paths_built = -1;
  bool isolated = false;
};

struct RunKpis {
  std::string scenario;
  uint64_t seed = 0;
  std::string protocol;
  std::vector<PacketKpi> packets;
  std::vector<NodeKpi> nodes;
  long undeliverable_count = 0;
};

/// Writes one CSV with a header row, one row per packet and one per node.
/// Deterministic for a fixed input; throws on unwritable path.
void export_csv(const RunKpis& run, const std::string& path);
std::string to_csv(const RunKpis& run);

/// Mean/min/max/stddev aggregation across runs, one row per metric.
std::string aggregate_csv(const std::vector<RunKpis>& runs);

}  // namespace blemesh
