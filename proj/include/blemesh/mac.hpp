#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "blemesh/channel.hpp"
#include "blemesh/engine.hpp"
#include "blemesh/metrics.hpp"
#include "blemesh/packet.hpp"

namespace blemesh {

struct MacConfig {
  SimTime adv_interval = SimTime::ms(1000);      // tau_AI
  SimTime adv_delay_max = SimTime::ms(10);       // delta upper bound
  SimTime adv_airtime = SimTime::us(240);        // one advertising PDU at 1 Mb/s
  SimTime adv_listen = SimTime::ms(1);           // post-PDU connection window
  SimTime scan_interval = SimTime::ms(10);       // tau_SI (= tau_SW, 100% duty)
  SimTime conn_setup = SimTime::us(500);         // request end to first data PDU
  SimTime conn_delay_max = SimTime::us(700);     // request jitter inside the window
  SimTime conn_backoff_max = SimTime::ms(300);   // pause after a failed attempt
  SimTime data_airtime = SimTime::us(240);
  SimTime turnaround = SimTime::us(150);
  SimTime ack_grace = SimTime::ms(1);
  int retx_limit = 3;
  SimTime failure_window = SimTime::sec(6);      // scan time before a link is dead
  double loss_probability = 0;                   // per-PDU loss inside a session
};

class Mac;

/// Upcalls into the node logic sitting above the MAC.
struct MacCallbacks {
  virtual ~MacCallbacks() = default;
  virtual AdvPayload current_adv_payload() = 0;
  virtual void on_adv_received(const AdvPayload& adv, double rssi_db) = 0;
  virtual LinkResponse on_packet(const Packet& pkt, int from) = 0;
  virtual void on_send_outcome(const Packet& pkt, int to, LinkResponse r) = 0;
  virtual void on_link_failure(int dest, std::vector<Packet> undelivered) = 0;
};

/// One node's advertising/scanning/session state machine. Advertising keeps
/// running while the node scans; sessions suspend both. Outgoing traffic is
/// serialized through a per-destination FIFO of jobs so at most one link is
/// being chased at a time.
class Mac : public MediumClient {
 public:
  Mac(Engine& eng, Medium& medium, int node_id, MacConfig cfg, RngStream rng);

  void set_callbacks(MacCallbacks* cb) { callbacks_ = cb; }
  void set_medium_index(int idx) { medium_idx_ = idx; }
  void set_peer_lookup(std::function<Mac*(int)> f) { peer_lookup_ = std::move(f); }

  void power_on(SimTime t);
  void power_off();  // immediate: drops sessions, queues stay (failure fires via timers' absence)
  bool powered() const { return powered_; }

  void enqueue(int dest, Packet pkt);
  /// Drops every queued packet for dest without declaring failure.
  std::vector<Packet> drain_queue(int dest);
  bool has_job(int dest) const;

  void start_continuous_scan();
  void stop_continuous_scan();

  int node_id() const { return id_; }
  RadioLedger& ledger() { return ledger_; }
  const RadioLedger& ledger() const { return ledger_; }
  long tx_count() const { return tx_count_; }
  long adv_tx_count() const { return adv_tx_count_; }

  // MediumClient
  bool listening_on(int channel, SimTime start, SimTime end) const override;
  bool conn_listening_on(int channel, SimTime start, SimTime end) const override;
  void receive_frame(const Frame& f, double rssi_db) override;

 private:
  struct Session {
    int peer = 0;
    bool initiator = false;
    Packet current;       // initiator side: in-flight packet
    int retx = 0;
    EventHandle ack_timeout;
    bool waiting_ack = false;
  };

  void schedule_next_burst(SimTime from);
  void start_burst();
  void burst_step();
  void end_burst();

  bool scanning() const { return powered_ && (scan_refs_ > 0 || !jobs_.empty()); }
  RadioState base_state() const { return scanning() ? RadioState::Rx : RadioState::Sleep; }
  void radio(RadioState s);
  void refresh_idle_radio();

  void begin_pursuit();          // arm scan + failure timer for the front job
  void cancel_failure_timer();
  void on_failure_timer();
  void try_connect(int target, int channel);
  void on_conn_request(const Frame& f);
  void session_established(int peer, bool initiator);
  void send_next_packet();
  void transmit_packet();
  void on_data_arrival(Packet pkt, int from, int link_seq);
  void on_link_response(int link_seq, LinkResponse resp);
  void on_ack_timeout();
  void finish_session();             // graceful end, offers the peer a role swap
  bool take_over_session(int peer);  // responder continues with its own backlog
  void close_session(bool notify_peer);
  void session_closed_by_peer();
  void finish_front_job_if_done();

  Engine& eng_;
  Medium& medium_;
  int id_;
  int medium_idx_ = -1;
  MacConfig cfg_;
  RngStream rng_;
  RadioLedger ledger_;
  MacCallbacks* callbacks_ = nullptr;
  std::function<Mac*(int)> peer_lookup_;

  bool powered_ = false;
  long tx_count_ = 0;
  long adv_tx_count_ = 0;

  // advertising
  EventHandle burst_timer_;
  long burst_gen_ = 0;  // bumped to abort in-flight burst continuations
  bool in_burst_ = false;
  int burst_ch_ = 0;
  SimTime burst_start_{};
  SimTime conn_window_start_{};
  SimTime conn_window_end_{-1};
  int conn_window_ch_ = -1;

  // scanning
  int scan_refs_ = 0;
  bool scan_flag_ = false;
  SimTime scan_anchor_{};
  std::deque<int> jobs_;
  std::map<int, std::deque<Packet>> queues_;
  EventHandle failure_timer_;
  bool failure_armed_ = false;

  // connection attempt
  bool pending_conn_ = false;
  int conn_target_ = 0;
  SimTime conn_retry_after_{0};

  // session
  bool in_session_ = false;
  Session session_;
  std::map<int, int> tx_link_seq_;         // next seq per peer
  std::map<int, int> last_rx_link_seq_;    // dedupe per peer

  friend class MacTestPeek;
};

}  // namespace blemesh
