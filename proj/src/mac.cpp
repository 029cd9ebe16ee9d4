#include "blemesh/mac.hpp"

#include <algorithm>
#include <cassert>

namespace blemesh {

Mac::Mac(Engine& eng, Medium& medium, int node_id, MacConfig cfg, RngStream rng)
    : eng_(eng), medium_(medium), id_(node_id), cfg_(cfg), rng_(rng) {}

void Mac::power_on(SimTime t) {
  powered_ = true;
  ledger_.begin(t, base_state());
  if (medium_idx_ >= 0) medium_.set_powered(medium_idx_, true);
  burst_timer_ = eng_.schedule(t, id_, EventKind::AdvTxStart,
                               [this](SimTime) { start_burst(); });
}

void Mac::power_off() {
  powered_ = false;
  eng_.cancel(burst_timer_);
  cancel_failure_timer();
  burst_gen_++;
  in_burst_ = false;
  conn_window_end_ = SimTime{-1};
  pending_conn_ = false;
  if (in_session_) close_session(true);
  if (medium_idx_ >= 0) medium_.set_powered(medium_idx_, false);
  radio(RadioState::Sleep);
}

void Mac::radio(RadioState s) { ledger_.transition(eng_.now(), s); }

void Mac::refresh_idle_radio() {
  if (!powered_ || in_session_ || in_burst_ || pending_conn_) return;
  radio(base_state());
}

// ---- advertising ----

void Mac::schedule_next_burst(SimTime from) {
  SimTime next = from + cfg_.adv_interval + rng_.uniform_duration(cfg_.adv_delay_max);
  burst_timer_ = eng_.schedule(next, id_, EventKind::AdvTxStart,
                               [this](SimTime) { start_burst(); });
}

void Mac::start_burst() {
  if (!powered_) return;
  burst_start_ = eng_.now();
  schedule_next_burst(burst_start_);
  if (in_session_ || pending_conn_) return;  // skip this cycle
  in_burst_ = true;
  burst_ch_ = 0;
  burst_gen_++;
  burst_step();
}

void Mac::burst_step() {
  long gen = burst_gen_;
  Frame f;
  f.type = FrameType::Advertisement;
  f.sender = id_;
  f.channel = 37 + burst_ch_;
  f.start = eng_.now();
  f.end = f.start + cfg_.adv_airtime;
  f.payload = callbacks_->current_adv_payload();
  adv_tx_count_++;
  radio(RadioState::Tx);
  medium_.transmit(medium_idx_, f);
  eng_.schedule(f.end, id_, EventKind::AdvTxEnd, [this, gen](SimTime t) {
    if (gen != burst_gen_ || !in_burst_) return;
    radio(RadioState::Rx);
    conn_window_start_ = t;
    conn_window_end_ = t + cfg_.adv_listen;
    conn_window_ch_ = 37 + burst_ch_;
  });
  eng_.schedule(f.end + cfg_.adv_listen, id_, EventKind::AdvListenEnd,
                [this, gen](SimTime) {
                  if (gen != burst_gen_ || !in_burst_) return;
                  conn_window_end_ = SimTime{-1};
                  burst_ch_++;
                  if (burst_ch_ < 3)
                    burst_step();
                  else
                    end_burst();
                });
}

void Mac::end_burst() {
  in_burst_ = false;
  conn_window_end_ = SimTime{-1};
  radio(base_state());
}

// ---- scanning and jobs ----

void Mac::start_continuous_scan() {
  bool was = scanning();
  scan_refs_++;
  if (!was && scanning()) {
    scan_flag_ = true;
    scan_anchor_ = eng_.now();
    refresh_idle_radio();
  }
}

void Mac::stop_continuous_scan() {
  assert(scan_refs_ > 0);
  scan_refs_--;
  if (!scanning()) {
    scan_flag_ = false;
    refresh_idle_radio();
  }
}

bool Mac::has_job(int dest) const {
  return std::find(jobs_.begin(), jobs_.end(), dest) != jobs_.end();
}

void Mac::enqueue(int dest, Packet pkt) {
  queues_[dest].push_back(std::move(pkt));
  if (!has_job(dest)) jobs_.push_back(dest);
  if (!in_session_ && !pending_conn_) begin_pursuit();
}

std::vector<Packet> Mac::drain_queue(int dest) {
  std::vector<Packet> out;
  auto it = queues_.find(dest);
  if (it != queues_.end()) {
    out.assign(it->second.begin(), it->second.end());
    queues_.erase(it);
  }
  bool was_front = !jobs_.empty() && jobs_.front() == dest;
  jobs_.erase(std::remove(jobs_.begin(), jobs_.end(), dest), jobs_.end());
  if (was_front) {
    cancel_failure_timer();
    if (!in_session_ && !pending_conn_) begin_pursuit();
  }
  if (!scanning()) scan_flag_ = false;
  refresh_idle_radio();
  return out;
}

void Mac::begin_pursuit() {
  if (!powered_ || jobs_.empty()) {
    if (!scanning()) scan_flag_ = false;
    refresh_idle_radio();
    return;
  }
  if (!scan_flag_) {
    scan_flag_ = true;
    scan_anchor_ = eng_.now();
  }
  refresh_idle_radio();
  if (!failure_armed_) {
    failure_armed_ = true;
    failure_timer_ = eng_.schedule(eng_.now() + cfg_.failure_window, id_,
                                   EventKind::LinkFailure,
                                   [this](SimTime) { on_failure_timer(); });
  }
}

void Mac::cancel_failure_timer() {
  if (failure_armed_) {
    eng_.cancel(failure_timer_);
    failure_armed_ = false;
  }
}

void Mac::on_failure_timer() {
  failure_armed_ = false;
  if (!powered_ || jobs_.empty()) return;
  if (in_session_ || pending_conn_) {  // clock restarts, sessions are short
    begin_pursuit();
    return;
  }
  int dest = jobs_.front();
  jobs_.pop_front();
  std::vector<Packet> lost(queues_[dest].begin(), queues_[dest].end());
  queues_.erase(dest);
  if (!scanning()) scan_flag_ = false;
  callbacks_->on_link_failure(dest, std::move(lost));
  if (!in_session_ && !pending_conn_) begin_pursuit();
}

// ---- connection setup ----

void Mac::try_connect(int target, int channel) {
  Frame f;
  f.type = FrameType::ConnRequest;
  f.sender = id_;
  f.channel = channel;
  f.start = eng_.now();
  f.end = f.start + cfg_.adv_airtime;
  f.conn_target = target;
  tx_count_++;
  radio(RadioState::Tx);
  medium_.transmit(medium_idx_, f);
  eng_.schedule(f.end, id_, EventKind::Generic, [this](SimTime) {
    if (pending_conn_) radio(RadioState::Rx);
  });
  SimTime deadline = f.end + cfg_.conn_setup + SimTime::us(100);
  eng_.schedule(deadline, id_, EventKind::Generic, [this, target](SimTime t) {
    if (pending_conn_ && conn_target_ == target && !in_session_) {
      pending_conn_ = false;  // request lost, back off before the next try
      conn_retry_after_ = t + rng_.uniform_duration(cfg_.conn_backoff_max);
      refresh_idle_radio();
      begin_pursuit();
    }
  });
}

void Mac::on_conn_request(const Frame& f) {
  if (in_session_ || !powered_) return;
  burst_gen_++;  // abort the rest of the burst
  in_burst_ = false;
  conn_window_end_ = SimTime{-1};
  in_session_ = true;
  session_ = Session{};
  session_.peer = f.sender;
  session_.initiator = false;
  radio(RadioState::Rx);
  int peer = f.sender;
  eng_.schedule(eng_.now() + cfg_.conn_setup, id_, EventKind::ConnEstablished,
                [this, peer](SimTime) {
                  Mac* p = peer_lookup_(peer);
                  if (!in_session_ || session_.peer != peer) return;
                  if (!p || !p->powered_) {
                    close_session(false);
                    return;
                  }
                  p->session_established(id_, true);
                });
}

void Mac::session_established(int peer, bool initiator) {
  if (!initiator) return;
  if (!pending_conn_ || conn_target_ != peer || in_session_) {
    Mac* p = peer_lookup_(peer);
    if (p) p->session_closed_by_peer();
    return;
  }
  pending_conn_ = false;
  in_session_ = true;
  session_ = Session{};
  session_.peer = peer;
  session_.initiator = true;
  if (!jobs_.empty() && jobs_.front() == peer) cancel_failure_timer();
  radio(RadioState::Rx);
  send_next_packet();
}

// ---- data exchange ----

void Mac::send_next_packet() {
  auto& q = queues_[session_.peer];
  if (q.empty()) {
    finish_session();
    return;
  }
  session_.current = q.front();
  session_.retx = 0;
  transmit_packet();
}

void Mac::transmit_packet() {
  int peer = session_.peer;
  int seq = tx_link_seq_[peer];  // advances only on response
  tx_count_++;
  radio(RadioState::Tx);
  SimTime end = eng_.now() + cfg_.data_airtime;
  eng_.schedule(end, id_, EventKind::Generic, [this, peer](SimTime) {
    if (in_session_ && session_.peer == peer) radio(RadioState::Rx);
  });
  if (rng_.uniform() >= cfg_.loss_probability) {
    Mac* p = peer_lookup_(peer);
    Packet pkt = session_.current;
    int from = id_;
    eng_.schedule(end, peer, EventKind::DataRx, [p, pkt, from, seq](SimTime) {
      if (p) p->on_data_arrival(pkt, from, seq);
    });
  }
  session_.waiting_ack = true;
  SimTime deadline = end + cfg_.turnaround + cfg_.data_airtime + cfg_.ack_grace;
  session_.ack_timeout = eng_.schedule(deadline, id_, EventKind::AckTimeout,
                                       [this](SimTime) { on_ack_timeout(); });
}

void Mac::on_data_arrival(Packet pkt, int from, int link_seq) {
  if (!in_session_ || session_.peer != from || session_.initiator) return;
  LinkResponse resp;
  auto it = last_rx_link_seq_.find(from);
  if (it != last_rx_link_seq_.end() && it->second == link_seq) {
    resp = LinkResponse::Ack;  // duplicate, re-ack without re-delivering
  } else {
    last_rx_link_seq_[from] = link_seq;
    resp = callbacks_->on_packet(pkt, from);
  }
  SimTime ack_start = eng_.now() + cfg_.turnaround;
  eng_.schedule(ack_start, id_, EventKind::AckTx, [this, from, link_seq,
                                                   resp](SimTime t) {
    if (!in_session_ || session_.peer != from) return;
    tx_count_++;
    radio(RadioState::Tx);
    SimTime end = t + cfg_.data_airtime;
    bool lost = rng_.uniform() < cfg_.loss_probability;
    eng_.schedule(end, id_, EventKind::Generic,
                  [this, from, link_seq, resp, lost](SimTime) {
                    if (in_session_ && session_.peer == from)
                      radio(RadioState::Rx);
                    if (lost) return;
                    Mac* p = peer_lookup_(from);
                    if (p) p->on_link_response(link_seq, resp);
                  });
  });
}

void Mac::on_link_response(int link_seq, LinkResponse resp) {
  if (!in_session_ || !session_.initiator || !session_.waiting_ack) return;
  if (tx_link_seq_[session_.peer] != link_seq) return;
  session_.waiting_ack = false;
  eng_.cancel(session_.ack_timeout);
  tx_link_seq_[session_.peer]++;
  int peer = session_.peer;
  Packet done = session_.current;
  auto& q = queues_[peer];
  if (!q.empty()) q.pop_front();
  callbacks_->on_send_outcome(done, peer, resp);
  if (in_session_ && session_.peer == peer) send_next_packet();
}

void Mac::on_ack_timeout() {
  if (!in_session_ || !session_.initiator || !session_.waiting_ack) return;
  session_.retx++;
  if (session_.retx <= cfg_.retx_limit) {
    transmit_packet();
  } else {
    close_session(true);  // packet stays queued, node goes back to scanning
  }
}

void Mac::finish_session() {
  // Graceful end of our sending turn.  The connection is bidirectional, so
  // before tearing it down we let the peer drain anything it queued for us
  // during the exchange (typical case: an immediate routing reply).
  if (!in_session_) return;
  int peer = session_.peer;
  if (session_.initiator) finish_front_job_if_done();
  Mac* p = peer_lookup_(peer);
  if (p && p->take_over_session(id_)) {
    session_.initiator = false;
    session_.waiting_ack = false;
    return;
  }
  in_session_ = false;
  eng_.cancel(session_.ack_timeout);
  if (p) p->session_closed_by_peer();
  if (!scanning()) scan_flag_ = false;
  refresh_idle_radio();
  if (powered_) begin_pursuit();
}

bool Mac::take_over_session(int peer) {
  if (!in_session_ || session_.peer != peer || session_.initiator) return false;
  auto it = queues_.find(peer);
  if (it == queues_.end() || it->second.empty()) return false;
  session_.initiator = true;
  session_.waiting_ack = false;
  if (!jobs_.empty() && jobs_.front() == peer) cancel_failure_timer();
  eng_.schedule(eng_.now() + cfg_.turnaround, id_, EventKind::Generic,
                [this, peer](SimTime) {
                  if (in_session_ && session_.peer == peer &&
                      session_.initiator && !session_.waiting_ack)
                    send_next_packet();
                });
  return true;
}

void Mac::close_session(bool notify_peer) {
  if (!in_session_) return;
  in_session_ = false;
  eng_.cancel(session_.ack_timeout);
  int peer = session_.peer;
  bool initiator = session_.initiator;
  if (notify_peer) {
    Mac* p = peer_lookup_(peer);
    if (p) p->session_closed_by_peer();
  }
  if (initiator) finish_front_job_if_done();
  if (!scanning()) scan_flag_ = false;
  refresh_idle_radio();
  if (powered_) begin_pursuit();
}

void Mac::session_closed_by_peer() {
  if (!in_session_) return;
  in_session_ = false;
  eng_.cancel(session_.ack_timeout);
  if (session_.initiator) finish_front_job_if_done();
  if (!scanning()) scan_flag_ = false;
  refresh_idle_radio();
  if (powered_) begin_pursuit();
}

void Mac::finish_front_job_if_done() {
  int peer = session_.peer;
  if (queues_[peer].empty()) {
    queues_.erase(peer);
    if (!jobs_.empty() && jobs_.front() == peer) {
      jobs_.pop_front();
      cancel_failure_timer();
    } else {
      jobs_.erase(std::remove(jobs_.begin(), jobs_.end(), peer), jobs_.end());
    }
  } else if (!jobs_.empty() && jobs_.front() == peer) {
    // more queued for the same peer: restart the failure clock
    cancel_failure_timer();
  }
}

// ---- medium hooks ----

bool Mac::listening_on(int channel, SimTime start, SimTime end) const {
  if (!powered_ || !scan_flag_ || in_session_ || pending_conn_ || in_burst_)
    return false;
  long long rel = start.ticks - scan_anchor_.ticks;
  if (rel < 0) return false;
  long long si = cfg_.scan_interval.ticks;
  long long idx = rel / si;
  if ((end.ticks - 1 - scan_anchor_.ticks) / si != idx) return false;
  return channel == 37 + static_cast<int>(idx % 3);
}

bool Mac::conn_listening_on(int channel, SimTime start, SimTime end) const {
  if (!powered_ || in_session_ || !in_burst_) return false;
  if (conn_window_end_.ticks < 0 || channel != conn_window_ch_) return false;
  return start.ticks >= conn_window_start_.ticks &&
         end.ticks <= conn_window_end_.ticks;
}

void Mac::receive_frame(const Frame& f, double rssi_db) {
  if (!powered_) return;
  if (f.type == FrameType::Advertisement) {
    callbacks_->on_adv_received(f.payload, rssi_db);
    if (!in_session_ && !pending_conn_ && !jobs_.empty() &&
        jobs_.front() == f.sender && eng_.now() >= conn_retry_after_) {
      // jitter the request inside the listen window so two scanners
      // answering the same advertisement do not always collide
      pending_conn_ = true;
      conn_target_ = f.sender;
      int ch = f.channel;
      SimTime at = eng_.now() + rng_.uniform_duration(cfg_.conn_delay_max);
      eng_.schedule(at, id_, EventKind::Generic, [this, ch](SimTime) {
        if (!powered_ || !pending_conn_ || in_session_) return;
        try_connect(conn_target_, ch);
      });
    }
  } else if (f.type == FrameType::ConnRequest && f.conn_target == id_) {
    on_conn_request(f);
  }
}

}  // namespace blemesh
