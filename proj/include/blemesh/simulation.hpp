#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "blemesh/channel.hpp"
#include "blemesh/config.hpp"
#include "blemesh/discovery.hpp"
#include "blemesh/engine.hpp"
#include "blemesh/flooding.hpp"
#include "blemesh/mac.hpp"
#include "blemesh/metrics.hpp"
#include "blemesh/recovery.hpp"
#include "blemesh/routing.hpp"
#include "blemesh/topology.hpp"

namespace blemesh {

class Simulation;

/// One mesh participant: glue between the MAC and the protocol agents plus
/// the data plane (forwarding, failure detection, recovery).
class Node : public MacCallbacks {
 public:
  Node(Simulation& sim, const NodeSpec& spec, uint64_t master_seed);

  void wake(SimTime t);
  void kill();  // failure injection

  int id() const { return id_; }
  bool is_head() const { return is_head_; }
  const NodeSpec& spec() const { return spec_; }
  Mac& mac() { return *mac_; }
  DiscoveryAgent& discovery() { return *discovery_; }
  GsaAgent& gsa() { return *gsa_; }
  FloodingAgent& flooding() { return *flood_; }

  void preset_hop(int hop) { preset_hop_ = hop; }
  int hop() const;
  /// Origin-side memory of each committed path's length (hops to head).
  void remember_path_len(RouteId r, int len) { path_len_[r] = len; }

  void send_app_packet(Packet pkt);  // origin side, route/flood chosen by protocol

  double discovery_delay_s = -1;
  double allphase_delay_s = -1;
  int paths_built = -1;

  // MacCallbacks
  AdvPayload current_adv_payload() override;
  void on_adv_received(const AdvPayload& adv, double rssi_db) override;
  LinkResponse on_packet(const Packet& pkt, int from) override;
  void on_send_outcome(const Packet& pkt, int to, LinkResponse r) override;
  void on_link_failure(int dest, std::vector<Packet> undelivered) override;

 private:
  LinkResponse on_data(const Packet& pkt, int from);
  void forward_data(Packet pkt, int next);
  void deliver_here(const Packet& pkt);
  LinkResponse on_failure_notice(const Packet& pkt);
  void handle_data_link_failure(int dest, std::vector<Packet> pkts);
  void start_multipath(std::vector<Packet> pkts);
  void start_hopdistance(std::vector<Packet> pkts, int failed);
  void origin_resend(std::vector<Packet> pkts);
  std::set<int> hb_exclusions(const Packet& pkt) const;

  Simulation& sim_;
  NodeSpec spec_;
  int id_;
  bool is_head_;
  int preset_hop_ = -1;
  std::unique_ptr<Mac> mac_;
  std::unique_ptr<DiscoveryAgent> discovery_;
  std::unique_ptr<GsaAgent> gsa_;
  std::unique_ptr<FloodingAgent> flood_;
  std::map<RouteId, int> path_len_;
};

/// Builds one scenario from a config, runs it, produces the KPI bundle.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);

  RunKpis run();

  Engine& engine() { return eng_; }
  Medium& medium() { return *medium_; }
  const ScenarioConfig& config() const { return cfg_; }
  Node* node(int id);
  const std::vector<NodeSpec>& topology() const { return specs_; }
  const std::map<int, std::vector<int>>& graph() const { return graph_; }
  std::string dump_routes() const;

  // node-facing services
  bool use_flooding() const { return cfg_.protocol == "flooding"; }
  bool discovery_enabled() const { return cfg_.scenario == "case1"; }
  RecoveryMode recovery_mode() const { return recovery_mode_; }
  RecoveryParams recovery_params() const;
  MacConfig mac_config(bool is_head) const;
  int head_id() const { return head_id_; }
  bool node_alive(int id);
  int register_packet(const Packet& pkt);  // returns packet id
  void note_delivered(const Packet& pkt);
  void note_undeliverable(const Packet& pkt);
  void make_app_ack(const Packet& data);  // head answers an acked packet

 private:
  void build();
  void preinstall_routes();
  void schedule_traffic();
  void schedule_failure();
  RunKpis collect();

  ScenarioConfig cfg_;
  RecoveryMode recovery_mode_;
  Engine eng_;
  ChannelParams chan_;
  std::unique_ptr<Medium> medium_;
  std::vector<NodeSpec> specs_;
  std::map<int, std::vector<int>> graph_;
  std::map<int, int> hops_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::map<int, Node*> by_id_;
  int head_id_ = 1;
  int source_id_ = -1;  // chain topology source
  std::vector<int> case3_path1_;
  int next_packet_id_ = 1;
  std::map<int, PacketKpi> pkts_;
  SimTime traffic_start_{};
};

}  // namespace blemesh
