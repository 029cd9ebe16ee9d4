#include "blemesh/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace blemesh {

AckPolicy parse_ack_policy(const std::string& s) {
  if (s == "none") return {AckPolicy::Mode::None, 0};
  if (s == "all") return {AckPolicy::Mode::All, 1};
  if (s.rfind("p=", 0) == 0) {
    double p = std::stod(s.substr(2));
    if (p < 0 || p > 1) throw std::runtime_error("ack probability out of [0,1]");
    return {AckPolicy::Mode::Prob, p};
  }
  throw std::runtime_error("bad ack policy: " + s);
}

std::string to_string(const AckPolicy& a) {
  switch (a.mode) {
    case AckPolicy::Mode::None: return "none";
    case AckPolicy::Mode::All: return "all";
    case AckPolicy::Mode::Prob: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "p=%g", a.p);
      return buf;
    }
  }
  return "none";
}

namespace {

enum class FieldType { Str, Dbl, Int, U64, Bool };

struct FieldDef {
  const char* section;
  const char* key;
  FieldType type;
  size_t offset;
};

#define F(sec, name, type) \
  { sec, #name, type, offsetof(ScenarioConfig, name) }

const std::vector<FieldDef>& fields() {
  static const std::vector<FieldDef> defs = {
      F("general", scenario, FieldType::Str),
      F("general", protocol, FieldType::Str),
      F("general", seed, FieldType::U64),
      F("general", duration_s, FieldType::Dbl),
      F("topology", topology, FieldType::Str),
      F("topology", grid_spacing_m, FieldType::Dbl),
      F("topology", row_spacing_m, FieldType::Dbl),
      F("topology", floor_height_m, FieldType::Dbl),
      F("topology", node_height_m, FieldType::Dbl),
      F("topology", chain_levels, FieldType::Int),
      F("topology", chain_lanes, FieldType::Int),
      F("topology", chain_level_spacing_m, FieldType::Dbl),
      F("topology", chain_lane_spacing_m, FieldType::Dbl),
      F("channel", f_mhz, FieldType::Dbl),
      F("channel", n_coeff, FieldType::Dbl),
      F("channel", floor_loss_db, FieldType::Dbl),
      F("channel", pl_threshold_db, FieldType::Dbl),
      F("channel", collisions, FieldType::Bool),
      F("mac", adv_interval_ms, FieldType::Dbl),
      F("mac", head_adv_interval_ms, FieldType::Dbl),
      F("mac", adv_delay_max_ms, FieldType::Dbl),
      F("mac", scan_interval_ms, FieldType::Dbl),
      F("mac", failure_window_s, FieldType::Dbl),
      F("mac", retx_limit, FieldType::Int),
      F("mac", loss_probability, FieldType::Dbl),
      F("discovery", discovery_timer_s, FieldType::Dbl),
      F("routing", num_paths, FieldType::Int),
      F("routing", max_ttl_cap, FieldType::Int),
      F("recovery", recovery_mode, FieldType::Str),
      F("recovery", gamma_s, FieldType::Dbl),
      F("recovery", alpha, FieldType::Dbl),
      F("recovery", beta, FieldType::Dbl),
      F("recovery", rediscovery_s, FieldType::Dbl),
      F("flooding", flood_ttl, FieldType::Int),
      F("flooding", broadcast_timer_s, FieldType::Dbl),
      F("flooding", flood_cache_capacity, FieldType::Int),
      F("energy", voltage_v, FieldType::Dbl),
      F("energy", tx_ma, FieldType::Dbl),
      F("energy", rx_ma, FieldType::Dbl),
      F("energy", idle_ma, FieldType::Dbl),
      F("energy", sleep_ma, FieldType::Dbl),
      F("traffic", packets_per_source, FieldType::Int),
      F("traffic", packet_interval_s, FieldType::Dbl),
      F("traffic", traffic_start_s, FieldType::Dbl),
      F("traffic", ack, FieldType::Str),
      F("traffic", energy_window_s, FieldType::Dbl),
      F("failure", failed_hop, FieldType::Int),
      F("failure", failure_time_s, FieldType::Dbl),
  };
  return defs;
}

#undef F

void* field_ptr(ScenarioConfig& c, const FieldDef& d) {
  return reinterpret_cast<char*>(&c) + d.offset;
}

const void* field_ptr(const ScenarioConfig& c, const FieldDef& d) {
  return reinterpret_cast<const char*>(&c) + d.offset;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void assign_checked(const FieldDef& d, const std::string& value, void* p) {
  switch (d.type) {
    case FieldType::Str:
      *static_cast<std::string*>(p) = value;
      break;
    case FieldType::Dbl:
      *static_cast<double*>(p) = std::stod(value);
      break;
    case FieldType::Int:
      *static_cast<int*>(p) = std::stoi(value);
      break;
    case FieldType::U64:
      *static_cast<uint64_t*>(p) = std::stoull(value);
      break;
    case FieldType::Bool:
      if (value == "true" || value == "1")
        *static_cast<bool*>(p) = true;
      else if (value == "false" || value == "0")
        *static_cast<bool*>(p) = false;
      else
        throw std::runtime_error("bad bool: " + value);
      break;
  }
}

void assign(ScenarioConfig& c, const FieldDef& d, const std::string& value) {
  void* p = field_ptr(c, d);
  try {
    assign_checked(d, value, p);
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::runtime_error("bad value for " + std::string(d.key) + ": " +
                             value);
  }
}

std::string render(const ScenarioConfig& c, const FieldDef& d) {
  const void* p = field_ptr(c, d);
  char buf[64];
  switch (d.type) {
    case FieldType::Str:
      return *static_cast<const std::string*>(p);
    case FieldType::Dbl:
      std::snprintf(buf, sizeof buf, "%g", *static_cast<const double*>(p));
      return buf;
    case FieldType::Int:
      std::snprintf(buf, sizeof buf, "%d", *static_cast<const int*>(p));
      return buf;
    case FieldType::U64:
      std::snprintf(buf, sizeof buf, "%llu",
                    static_cast<unsigned long long>(
                        *static_cast<const uint64_t*>(p)));
      return buf;
    case FieldType::Bool:
      return *static_cast<const bool*>(p) ? "true" : "false";
  }
  return "";
}

}  // namespace

void apply_scenario_defaults(ScenarioConfig& c) {
  if (c.scenario == "case2") {
    c.packets_per_source = 3;
    c.ack = "all";
    // 30 sources x 3 packets each, acked: the default flood cache would wrap
    // while copies are still in flight and recirculate evicted messages
    c.flood_cache_capacity = 256;
  } else if (c.scenario == "case3") {
    c.topology = "chain";
    c.packets_per_source = 8;
  }
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& d : fields()) known = known || section == d.section;
      if (!known)
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": unknown section [" + section + "]");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    const FieldDef* def = nullptr;
    for (const auto& d : fields()) {
      if (section == d.section && key == d.key) {
        def = &d;
        break;
      }
    }
    if (!def)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": unknown key " + section + "." + key);
    assign(c, *def, value);
  }
  parse_ack_policy(c.ack);  // validate
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string out;
  std::string section;
  for (const auto& d : fields()) {
    if (section != d.section) {
      if (!out.empty()) out += "\n";
      section = d.section;
      out += "[" + section + "]\n";
    }
    out += std::string(d.key) + " = " + render(c, d) + "\n";
  }
  return out;
}

}  // namespace blemesh
