#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blemesh/discovery.hpp"

using namespace blemesh;

namespace {

AdvPayload adv(int sender, int hop) {
  AdvPayload p;
  p.sender = sender;
  p.hop = hop;
  return p;
}

}  // namespace

TEST_CASE("uninformative advertisements are dropped") {
  Engine eng;
  DiscoveryAgent d(eng, 5, false, SimTime::sec(3));
  d.start();
  d.on_adv(adv(7, kUnknownHop), -60);
  CHECK(d.neighbors().empty());
  CHECK(d.my_hop() == kUnknownHop);
}

TEST_CASE("hop count converges to min(neighbor)+1") {
  Engine eng;
  DiscoveryAgent d(eng, 5, false, SimTime::sec(3));
  d.start();
  d.on_adv(adv(7, 3), -60);
  CHECK(d.my_hop() == 4);
  d.on_adv(adv(8, 1), -70);
  CHECK(d.my_hop() == 2);
  d.on_adv(adv(9, 5), -50);  // worse information never raises it
  CHECK(d.my_hop() == 2);
  CHECK(d.neighbors().size() == 3);
  CHECK(d.neighbors().at(8).hop == 1);
}

TEST_CASE("the head keeps hop zero") {
  Engine eng;
  DiscoveryAgent d(eng, 1, true, SimTime::sec(3));
  d.start();
  CHECK(d.my_hop() == 0);
  d.on_adv(adv(7, 1), -60);
  CHECK(d.my_hop() == 0);
}

TEST_CASE("completion fires one expiry after the last piece of news") {
  Engine eng;
  DiscoveryAgent d(eng, 5, false, SimTime::sec(3));
  bool done = false;
  SimTime done_at{-1};
  d.on_complete = [&] {
    done = true;
    done_at = eng.now();
  };
  d.start();

  eng.schedule(SimTime::sec(1), 5, EventKind::Generic,
               [&](SimTime) { d.on_adv(adv(7, 2), -60); });
  // same content again at t=2: not news, timer must not re-arm
  eng.schedule(SimTime::sec(2), 5, EventKind::Generic,
               [&](SimTime) { d.on_adv(adv(7, 2), -60); });
  // changed hop at t=2.5: news, timer re-arms
  eng.schedule(SimTime{2'500'000}, 5, EventKind::Generic,
               [&](SimTime) { d.on_adv(adv(7, 1), -60); });

  eng.run_until(SimTime::sec(4));
  CHECK(!done);  // would have fired at t=4.0 had the duplicate re-armed
  eng.run_until(SimTime::sec(6));
  CHECK(done);
  CHECK(done_at == SimTime{5'500'000});
  CHECK(d.complete());
  CHECK(d.completed_at() == done_at);
}

TEST_CASE("no news means no completion") {
  Engine eng;
  DiscoveryAgent d(eng, 5, false, SimTime::sec(3));
  bool done = false;
  d.on_complete = [&] { done = true; };
  d.start();
  eng.run_until(SimTime::sec(60));
  CHECK(!done);
}

TEST_CASE("forget and seed round-trip the table") {
  Engine eng;
  DiscoveryAgent d(eng, 5, false, SimTime::sec(3));
  d.start();
  d.on_adv(adv(7, 2), -60);
  CHECK(d.neighbors().count(7) == 1);
  d.forget(7);
  CHECK(d.neighbors().empty());
  CHECK(d.my_hop() == 3);  // hop estimate survives the table edit

  NeighborEntry e;
  e.id = 9;
  e.hop = 1;
  e.rssi_db = -55;
  d.seed_neighbor(e);
  CHECK(d.neighbors().at(9).hop == 1);
}
