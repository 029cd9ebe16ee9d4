#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blemesh/config.hpp"
#include "blemesh/metrics.hpp"
#include "blemesh/simulation.hpp"

int main(int argc, char** argv) {
  CLI::App app{"BLE mesh network simulator"};

  std::string config_path;
  std::string out_path;
  std::string scenario, protocol;
  uint64_t seed = 0;
  bool seed_set = false;
  int runs = 1;
  bool dump_routes = false;
  bool print_config = false;

  app.add_option("-c,--config", config_path, "scenario config file (INI)");
  app.add_option("-o,--out", out_path, "KPI CSV output path");
  app.add_option("-s,--scenario", scenario,
                 "override scenario: case1|case2|case3");
  app.add_option("-p,--protocol", protocol, "override protocol: proposed|flooding");
  app.add_option("--seed", seed, "override master seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("-n,--runs", runs, "independent runs (seed, seed+1, ...)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--dump-routes", dump_routes, "print committed routes after the run");
  app.add_flag("--print-config", print_config, "print the effective config and exit");

  CLI11_PARSE(app, argc, argv);

  try {
    blemesh::ScenarioConfig cfg;
    if (!config_path.empty()) cfg = blemesh::load_config_file(config_path);
    if (!scenario.empty()) cfg.scenario = scenario;
    if (config_path.empty()) blemesh::apply_scenario_defaults(cfg);
    if (!protocol.empty()) cfg.protocol = protocol;
    if (seed_set) cfg.seed = seed;

    if (print_config) {
      std::cout << blemesh::serialize_config(cfg);
      return 0;
    }

    std::vector<blemesh::RunKpis> results;
    for (int i = 0; i < runs; ++i) {
      blemesh::ScenarioConfig rc = cfg;
      rc.seed = cfg.seed + static_cast<uint64_t>(i);
      blemesh::Simulation sim(rc);
      results.push_back(sim.run());
      if (!out_path.empty()) {
        std::string path = out_path;
        if (runs > 1) {
          auto dot = path.rfind(".csv");
          std::string tag = ".seed" + std::to_string(rc.seed);
          if (dot != std::string::npos)
            path.insert(dot, tag);
          else
            path += tag;
        }
        blemesh::export_csv(results.back(), path);
      }
      if (dump_routes) std::cout << sim.dump_routes();
    }

    long delivered = 0, total = 0, undeliverable = 0;
    for (const auto& r : results) {
      total += static_cast<long>(r.packets.size());
      undeliverable += r.undeliverable_count;
      for (const auto& p : r.packets) delivered += p.delivered ? 1 : 0;
    }
    std::fprintf(stderr, "runs=%d packets=%ld delivered=%ld undeliverable=%ld\n",
                 runs, total, delivered, undeliverable);
    if (runs > 1) std::cout << blemesh::aggregate_csv(results);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
