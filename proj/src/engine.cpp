#include "blemesh/engine.hpp"

#include <stdexcept>

namespace blemesh {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::AdvTxStart: return "adv-tx-start";
    case EventKind::AdvTxEnd: return "adv-tx-end";
    case EventKind::AdvListenEnd: return "adv-listen-end";
    case EventKind::ConnEstablished: return "conn-established";
    case EventKind::DataRx: return "data-rx";
    case EventKind::AckTx: return "ack-tx";
    case EventKind::AckTimeout: return "ack-timeout";
    case EventKind::LinkFailure: return "link-failure";
    case EventKind::TimerDiscovery: return "timer-discovery";
    case EventKind::TimerBroadcast: return "timer-broadcast";
    case EventKind::PacketArrival: return "packet-arrival";
    case EventKind::Generic: return "generic";
  }
  return "?";
}

EventHandle Engine::schedule(SimTime fire_at, int target, EventKind kind,
                             Handler fn) {
  if (fire_at < now_) {
    throw std::invalid_argument("schedule: fire_at is in the past");
  }
  auto rec = std::make_shared<Record>();
  rec->fire_at = fire_at;
  rec->seq = next_seq_++;
  rec->target = target;
  rec->kind = kind;
  rec->fn = std::move(fn);
  queue_.push(rec);
  ++live_;
  EventHandle h;
  h.ev_ = rec;
  return h;
}

bool Engine::cancel(EventHandle& h) {
  auto rec = h.ev_.lock();
  if (!rec || rec->cancelled) return false;
  rec->cancelled = true;
  --live_;
  h.ev_.reset();
  return true;
}

size_t Engine::run_until(SimTime end) {
  size_t dispatched = 0;
  while (!queue_.empty() && queue_.top()->fire_at <= end) {
    auto rec = queue_.top();
    queue_.pop();
    if (rec->cancelled) continue;
    --live_;
    now_ = rec->fire_at;
    if (logging_) {
      log_.push_back({rec->fire_at.ticks, rec->seq, rec->kind, rec->target});
    }
    rec->fn(now_);
    ++dispatched;
  }
  return dispatched;
}

// SplitMix64; full-period, any 64-bit seed is fine.
static uint64_t splitmix64(uint64_t& x) {
  uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(uint64_t master_seed, uint64_t substream) {
  uint64_t s = master_seed;
  uint64_t a = splitmix64(s);
  s = a ^ (substream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
  state_ = splitmix64(s);
  if (state_ == 0) state_ = 0x2545F4914F6CDD1DULL;
}

uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int64_t RngStream::uniform_int(int64_t lo, int64_t hi) {
  uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int64_t>(next_u64() % span);
}

SimTime RngStream::uniform_duration(SimTime max) {
  if (max.ticks <= 0) return SimTime{0};
  return SimTime{uniform_int(0, max.ticks)};
}

}  // namespace blemesh
