#include "blemesh/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blemesh {

const char* to_string(RadioState s) {
  switch (s) {
    case RadioState::Sleep: return "sleep";
    case RadioState::Rx: return "rx";
    case RadioState::Tx: return "tx";
    case RadioState::Idle: return "idle";
  }
  return "?";
}

const char* to_string(RecoveryMethodTag m) {
  switch (m) {
    case RecoveryMethodTag::None: return "none";
    case RecoveryMethodTag::MultiPath: return "mp";
    case RecoveryMethodTag::HopDistance: return "hb";
  }
  return "?";
}

double EnergyModel::current_ma(RadioState s) const {
  switch (s) {
    case RadioState::Sleep: return sleep_ma;
    case RadioState::Rx: return rx_ma;
    case RadioState::Tx: return tx_ma;
    case RadioState::Idle: return idle_ma;
  }
  return 0.0;
}

void RadioLedger::begin(SimTime t, RadioState s) {
  assert(!started_);
  started_ = true;
  current_ = s;
  since_ = t;
}

void RadioLedger::transition(SimTime t, RadioState s) {
  assert(started_);
  assert(t >= since_);
  if (t > since_) intervals_.push_back({current_, since_, t});
  current_ = s;
  since_ = t;
}

void RadioLedger::finish(SimTime t) {
  if (!started_) return;
  transition(t, RadioState::Sleep);
  started_ = false;
}

static int64_t overlap_ticks(SimTime s, SimTime e, SimTime from, SimTime to) {
  int64_t lo = std::max(s.ticks, from.ticks);
  int64_t hi = std::min(e.ticks, to.ticks);
  return std::max<int64_t>(0, hi - lo);
}

double RadioLedger::energy_mj(const EnergyModel& m, SimTime from,
                              SimTime to) const {
  double mj = 0;
  for (const auto& iv : intervals_) {
    int64_t t = overlap_ticks(iv.start, iv.end, from, to);
    if (t > 0) mj += (t / 1e6) * m.power_mw(iv.state);  // mW * s = mJ
  }
  if (started_) {
    int64_t t = overlap_ticks(since_, to, from, to);
    if (t > 0) mj += (t / 1e6) * m.power_mw(current_);
  }
  return mj;
}

double RadioLedger::average_power_mw(const EnergyModel& m, SimTime from,
                                     SimTime to) const {
  int64_t dur = to.ticks - from.ticks;
  if (dur <= 0) return 0;
  return energy_mj(m, from, to) / (dur / 1e6);
}

SimTime RadioLedger::state_time(RadioState s, SimTime from, SimTime to) const {
  int64_t t = 0;
  for (const auto& iv : intervals_) {
    if (iv.state == s) t += overlap_ticks(iv.start, iv.end, from, to);
  }
  if (started_ && current_ == s) t += overlap_ticks(since_, to, from, to);
  return SimTime{t};
}

SimTime RadioLedger::total_time() const {
  int64_t t = 0;
  for (const auto& iv : intervals_) t += iv.end.ticks - iv.start.ticks;
  return SimTime{t};
}

static std::string fnum(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string to_csv(const RunKpis& run) {
  std::ostringstream os;
  os << "row_type,scenario,seed,protocol,id,origin,dest,gen_s,delivered,"
        "delivery_s,latency_s,undeliverable,recovery_method,x_hops,z_hops,"
        "failed_hop,recovery_latency_s,predicted_hb_s,predicted_mp_s,"
        "avg_power_mw,energy_mj,tx_count,adv_tx_count,discovery_delay_s,"
        "allphase_delay_s,paths_built,isolated\n";
  for (const auto& p : run.packets) {
    os << "packet," << run.scenario << ',' << run.seed << ',' << run.protocol
       << ',' << p.packet_id << ',' << p.origin << ',' << p.dest << ','
       << fnum(p.gen_s) << ',' << (p.delivered ? 1 : 0) << ','
       << fnum(p.delivery_s) << ',' << fnum(p.latency_s) << ','
       << (p.undeliverable ? 1 : 0) << ',' << to_string(p.method) << ','
       << p.x_hops << ',' << p.z_hops << ',' << p.failed_hop << ','
       << fnum(p.recovery_latency_s) << ',' << fnum(p.predicted_hb_s) << ','
       << fnum(p.predicted_mp_s) << ",,,,,,,,\n";
  }
  for (const auto& n : run.nodes) {
    os << "node," << run.scenario << ',' << run.seed << ',' << run.protocol
       << ',' << n.node_id << ",,,,,,,,,,,,,,," << fnum(n.avg_power_mw) << ','
       << fnum(n.energy_mj) << ',' << n.tx_count << ',' << n.adv_tx_count
       << ',' << fnum(n.discovery_delay_s) << ',' << fnum(n.allphase_delay_s)
       << ',' << n.paths_built << ',' << (n.isolated ? 1 : 0) << '\n';
  }
  return os.str();
}

void export_csv(const RunKpis& run, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write CSV file: " + path);
  f << to_csv(run);
  if (!f) throw std::runtime_error("write failed: " + path);
}

namespace {
struct Stat {
  std::vector<double> vals;
  void add(double v) { vals.push_back(v); }
  double mean() const {
    if (vals.empty()) return 0;
    double s = 0;
    for (double v : vals) s += v;
    return s / vals.size();
  }
  double mn() const { return vals.empty() ? 0 : *std::min_element(vals.begin(), vals.end()); }
  double mx() const { return vals.empty() ? 0 : *std::max_element(vals.begin(), vals.end()); }
  double sd() const {
    if (vals.size() < 2) return 0;
    double m = mean(), s = 0;
    for (double v : vals) s += (v - m) * (v - m);
    return std::sqrt(s / (vals.size() - 1));
  }
};
}  // namespace

std::string aggregate_csv(const std::vector<RunKpis>& runs) {
  Stat latency, power, recovery, disc, allphase;
  long undeliverable = 0;
  for (const auto& r : runs) {
    undeliverable += r.undeliverable_count;
    for (const auto& p : r.packets) {
      if (p.delivered) latency.add(p.latency_s);
      if (p.delivered && p.method != RecoveryMethodTag::None)
        recovery.add(p.recovery_latency_s);
    }
    for (const auto& n : r.nodes) {
      power.add(n.avg_power_mw);
      if (n.discovery_delay_s >= 0) disc.add(n.discovery_delay_s);
      if (n.allphase_delay_s >= 0) allphase.add(n.allphase_delay_s);
    }
  }
  std::ostringstream os;
  os << "metric,count,mean,min,max,stddev\n";
  auto row = [&os](const char* name, const Stat& s) {
    os << name << ',' << s.vals.size() << ',' << fnum(s.mean()) << ','
       << fnum(s.mn()) << ',' << fnum(s.mx()) << ',' << fnum(s.sd()) << '\n';
  };
  row("packet_latency_s", latency);
  row("recovery_latency_s", recovery);
  row("node_avg_power_mw", power);
  row("discovery_delay_s", disc);
  row("allphase_delay_s", allphase);
  os << "undeliverable_total," << undeliverable << ",,,,\n";
  return os.str();
}

}  // namespace blemesh
