#pragma once

#include <cstdint>
#include <string>

namespace blemesh {

/// End-to-end acknowledgment policy for generated traffic.
struct AckPolicy {
  enum class Mode { None, All, Prob };
  Mode mode = Mode::None;
  double p = 0;
};

/// "none", "all" or "p=<prob>"; throws std::runtime_error otherwise.
AckPolicy parse_ack_policy(const std::string& s);
std::string to_string(const AckPolicy& a);

/// Everything a run needs, flat and serializable. Defaults reproduce the
/// building scenario.
struct ScenarioConfig {
  // [general]
  std::string scenario = "case1";  // case1 | case2 | case3 | custom
  std::string protocol = "proposed";  // proposed | flooding
  uint64_t seed = 1;
  double duration_s = 120;

  // [topology]
  std::string topology = "building";  // building | chain
  double grid_spacing_m = 12;
  double row_spacing_m = 12;
  double floor_height_m = 4;
  double node_height_m = 1.2;
  int chain_levels = 4;
  int chain_lanes = 5;
  double chain_level_spacing_m = 15;
  double chain_lane_spacing_m = 2;

  // [channel]
  double f_mhz = 2400;
  double n_coeff = 22;
  double floor_loss_db = 6;
  double pl_threshold_db = 70;
  bool collisions = true;

  // [mac]
  double adv_interval_ms = 1000;
  double head_adv_interval_ms = 100;
  double adv_delay_max_ms = 10;
  double scan_interval_ms = 10;
  double failure_window_s = 6;
  int retx_limit = 3;
  double loss_probability = 0;

  // [discovery]
  double discovery_timer_s = 3;

  // [routing]
  int num_paths = 5;
  int max_ttl_cap = 16;

  // [recovery]
  std::string recovery_mode = "adaptive";  // mp | hb | adaptive
  double gamma_s = 0.5;
  double alpha = 0;
  double beta = 0;
  double rediscovery_s = 2.3;  // r, the scan window a rediscovery costs

  // [flooding]
  int flood_ttl = 127;
  double broadcast_timer_s = 1.5;
  int flood_cache_capacity = 64;

  // [energy]
  double voltage_v = 3.3;
  double tx_ma = 7.3;
  double rx_ma = 6.5;
  double idle_ma = 0.7;
  double sleep_ma = 0.001;

  // [traffic]
  int packets_per_source = 1;
  double packet_interval_s = 10;
  double traffic_start_s = 5;
  std::string ack = "none";
  double energy_window_s = 60;  // power averaged over this window from traffic start

  // [failure]  (case3)
  int failed_hop = 1;
  double failure_time_s = 20;
};

/// Baseline settings for the three canned experiments: case2 turns on acked
/// periodic traffic, case3 switches to the chain topology with a packet train
/// spanning the failure. Explicit config files take precedence by simply not
/// calling this.
void apply_scenario_defaults(ScenarioConfig& c);

/// INI text: [section] headers, key = value, '#'/';' comments.
/// Unknown sections or keys throw std::runtime_error.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);
std::string serialize_config(const ScenarioConfig& c);

}  // namespace blemesh
