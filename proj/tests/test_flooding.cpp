#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "blemesh/flooding.hpp"

using namespace blemesh;

namespace {

struct Capture {
  std::vector<std::pair<int, Packet>> sent;
  std::vector<Packet> delivered;
};

FloodingAgent make_agent(Engine& eng, int id, Capture& cap,
                         std::vector<int> neighbors, FloodingConfig cfg = {}) {
  FloodingAgent a(eng, id, cfg);
  a.set_neighbors(std::move(neighbors));
  a.send = [&cap](int dest, Packet p) { cap.sent.push_back({dest, std::move(p)}); };
  a.on_deliver = [&cap](const Packet& p) { cap.delivered.push_back(p); };
  return a;
}

Packet data(int origin, int dest) {
  Packet p;
  p.kind = PacketKind::Data;
  p.origin = origin;
  p.final_dest = dest;
  return p;
}

}  // namespace

TEST_CASE("originate stamps flood fields and fans out after the timer") {
  Engine eng;
  Capture cap;
  auto a = make_agent(eng, 5, cap, {2, 3, 4});
  a.originate(data(5, 1));

  CHECK(cap.sent.empty());  // coalescing timer still running
  eng.run_until(SimTime::ms(1400));
  CHECK(cap.sent.empty());
  eng.run_until(SimTime::ms(1600));
  REQUIRE(cap.sent.size() == 3);
  std::vector<int> dests;
  for (const auto& [d, p] : cap.sent) {
    dests.push_back(d);
    CHECK(p.kind == PacketKind::Flood);
    CHECK(p.flood_ttl == 127);
    CHECK(p.flood_seq == 1);
    CHECK(p.origin == 5);
  }
  CHECK(dests == std::vector<int>{2, 3, 4});
}

TEST_CASE("several packets ride one round of sessions") {
  Engine eng;
  Capture cap;
  auto a = make_agent(eng, 5, cap, {2, 3});
  a.originate(data(5, 1));
  eng.run_until(SimTime::ms(100));
  a.originate(data(5, 1));
  eng.run_until(SimTime::sec(2));
  CHECK(cap.sent.size() == 4);  // 2 packets x 2 neighbors, one timer round
}

TEST_CASE("relays skip the arrival link and spend ttl") {
  Engine eng;
  Capture cap;
  auto a = make_agent(eng, 5, cap, {2, 3, 4});
  Packet p = data(9, 1);
  p.kind = PacketKind::Flood;
  p.flood_seq = 11;
  p.flood_ttl = 10;

  CHECK(a.handle_packet(p, 3) == LinkResponse::Ack);
  eng.run_until(SimTime::sec(2));
  REQUIRE(cap.sent.size() == 2);
  CHECK(cap.sent[0].first == 2);
  CHECK(cap.sent[1].first == 4);
  CHECK(cap.sent[0].second.flood_ttl == 9);
  CHECK(cap.delivered.empty());
}

TEST_CASE("duplicates are acked but not re-flooded") {
  Engine eng;
  Capture cap;
  auto a = make_agent(eng, 5, cap, {2, 3});
  Packet p = data(9, 1);
  p.kind = PacketKind::Flood;
  p.flood_seq = 11;
  p.flood_ttl = 10;

  a.handle_packet(p, 2);
  CHECK(a.handle_packet(p, 3) == LinkResponse::Ack);  // dup from elsewhere
  eng.run_until(SimTime::sec(2));
  CHECK(cap.sent.size() == 1);  // only the first copy, only toward 3
  CHECK(cap.sent[0].first == 3);
}

TEST_CASE("delivery at the destination, no further relay") {
  Engine eng;
  Capture cap;
  auto a = make_agent(eng, 1, cap, {2, 3});
  Packet p = data(9, 1);
  p.kind = PacketKind::Flood;
  p.flood_seq = 4;
  p.flood_ttl = 10;
  a.handle_packet(p, 2);
  eng.run_until(SimTime::sec(2));
  REQUIRE(cap.delivered.size() == 1);
  CHECK(cap.delivered[0].origin == 9);
  CHECK(cap.sent.empty());
}

TEST_CASE("expired ttl stops the flood") {
  Engine eng;
  Capture cap;
  auto a = make_agent(eng, 5, cap, {2, 3});
  Packet p = data(9, 1);
  p.kind = PacketKind::Flood;
  p.flood_seq = 4;
  p.flood_ttl = 0;
  a.handle_packet(p, 2);
  eng.run_until(SimTime::sec(2));
  CHECK(cap.sent.empty());
}

TEST_CASE("cache eviction re-admits the oldest flood") {
  Engine eng;
  Capture cap;
  FloodingConfig cfg;
  cfg.cache_capacity = 4;
  auto a = make_agent(eng, 5, cap, {2, 3}, cfg);

  Packet p = data(9, 1);
  p.kind = PacketKind::Flood;
  p.flood_ttl = 10;

  p.flood_seq = 1;
  a.handle_packet(p, 2);
  a.handle_packet(p, 2);  // dup, suppressed
  eng.run_until(SimTime::sec(2));
  size_t after_first = cap.sent.size();

  for (int s = 2; s <= 5; ++s) {  // four fresh floods push seq 1 out
    p.flood_seq = s;
    a.handle_packet(p, 2);
  }
  p.flood_seq = 1;
  a.handle_packet(p, 2);  // evicted, so treated as new again
  eng.run_until(SimTime::sec(4));
  CHECK(cap.sent.size() == after_first + 5);
}
