#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <vector>

namespace blemesh {

/// Simulation time in integer microseconds since run start.
struct SimTime {
  int64_t ticks = 0;

  static constexpr SimTime us(int64_t v) { return SimTime{v}; }
  static constexpr SimTime ms(int64_t v) { return SimTime{v * 1000}; }
  static constexpr SimTime sec(double v) {
    return SimTime{static_cast<int64_t>(v * 1e6)};
  }

  double seconds() const { return static_cast<double>(ticks) / 1e6; }

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return {a.ticks + b.ticks}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return {a.ticks - b.ticks}; }
  auto operator<=>(const SimTime&) const = default;
};

enum class EventKind {
  AdvTxStart,
  AdvTxEnd,
  AdvListenEnd,
  ConnEstablished,
  DataRx,
  AckTx,
  AckTimeout,
  LinkFailure,
  TimerDiscovery,
  TimerBroadcast,
  PacketArrival,
  Generic,
};

const char* to_string(EventKind k);

/// Dispatch-log entry; the ordered log is the replay/determinism witness.
struct EventLogEntry {
  int64_t ticks;
  uint64_t seq;
  EventKind kind;
  int target;

  bool operator==(const EventLogEntry&) const = default;
};

class EventHandle;

/// Deterministic discrete-event scheduler. Events dispatch in strict
/// (fire_at, seq) order; seq is the insertion sequence, unique per run.
class Engine {
 public:
  using Handler = std::function<void(SimTime)>;

  SimTime now() const { return now_; }

  /// Throws std::invalid_argument when fire_at < now().
  EventHandle schedule(SimTime fire_at, int target, EventKind kind, Handler fn);

  /// Returns true when the event was pending and is now removed.
  bool cancel(EventHandle& h);

  /// Dispatches all events with fire_at <= end; returns the dispatch count.
  /// now() advances to each dispatch time and never beyond the last one.
  size_t run_until(SimTime end);

  bool empty() const { return live_ == 0; }
  const std::vector<EventLogEntry>& event_log() const { return log_; }
  void set_logging(bool on) { logging_ = on; }

 private:
  friend class EventHandle;

  struct Record {
    SimTime fire_at;
    uint64_t seq;
    int target;
    EventKind kind;
    Handler fn;
    bool cancelled = false;
  };

  struct Later {
    bool operator()(const std::shared_ptr<Record>& a,
                    const std::shared_ptr<Record>& b) const {
      if (a->fire_at != b->fire_at) return a->fire_at > b->fire_at;
      return a->seq > b->seq;
    }
  };

  SimTime now_{0};
  uint64_t next_seq_ = 0;
  size_t live_ = 0;
  bool logging_ = true;
  std::priority_queue<std::shared_ptr<Record>,
                      std::vector<std::shared_ptr<Record>>, Later>
      queue_;
  std::vector<EventLogEntry> log_;
};

class EventHandle {
 public:
  EventHandle() = default;
  bool pending() const {
    auto r = ev_.lock();
    return r && !r->cancelled;
  }

 private:
  friend class Engine;
  std::weak_ptr<Engine::Record> ev_;
};

/// Deterministic per-node random substream derived from a master seed.
/// Adding or removing a node never perturbs another node's draws.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(uint64_t master_seed, uint64_t substream);

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform integer in [lo, hi] inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi);
  /// Uniform duration in [0, max].
  SimTime uniform_duration(SimTime max);

 private:
  uint64_t state_;
  uint64_t next_u64();
};

}  // namespace blemesh
