#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blemesh/recovery.hpp"

using namespace blemesh;

TEST_CASE("latency equations at the reference points") {
  RecoveryParams p;  // r=2.3, gamma=0.5, alpha=beta=0
  CHECK(hb_latency_s(p, 5, 3) == doctest::Approx(3.8).epsilon(1e-12));
  CHECK(mp_latency_s(p, 5, 3) == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(hb_latency_s(p, 5, 4) == doctest::Approx(3.3).epsilon(1e-12));
  CHECK(mp_latency_s(p, 5, 4) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(hb_latency_s(p, 5, 1) == doctest::Approx(2.3 + 0.5 * 5).epsilon(1e-12));
  CHECK(mp_latency_s(p, 5, 1) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("tuning offsets shift the equations linearly") {
  RecoveryParams p;
  p.alpha = 2;
  p.beta = 3;
  CHECK(hb_latency_s(p, 5, 3) == doctest::Approx(3.8 + 0.5 * 2).epsilon(1e-12));
  CHECK(mp_latency_s(p, 5, 3) == doctest::Approx(3.5 + 0.5 * 3).epsilon(1e-12));
  RecoveryParams q;
  q.gamma_s = 1.0;
  CHECK(mp_latency_s(q, 5, 3) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("method switch point") {
  RecoveryParams p;
  CHECK(hb_threshold_x(p) == doctest::Approx(3.3).epsilon(1e-12));
  CHECK(choose_recovery(p, 5, 3) == RecoveryMethodTag::MultiPath);
  CHECK(choose_recovery(p, 5, 4) == RecoveryMethodTag::HopDistance);
  // hop-distance wins exactly when its equation is strictly smaller
  for (int z = 2; z <= 10; ++z)
    for (int x = 1; x <= z; ++x) {
      bool hb_better = hb_latency_s(p, z, x) < mp_latency_s(p, z, x);
      CHECK(choose_recovery(p, z, x) ==
            (hb_better ? RecoveryMethodTag::HopDistance
                       : RecoveryMethodTag::MultiPath));
    }
}

TEST_CASE("exact tie goes to multi-path") {
  RecoveryParams p;
  p.r_s = 2.0;  // makes the equations meet at x=3 for any z
  CHECK(hb_latency_s(p, 5, 3) == doctest::Approx(mp_latency_s(p, 5, 3)));
  CHECK(choose_recovery(p, 5, 3) == RecoveryMethodTag::MultiPath);
  CHECK(choose_recovery(p, 5, 4) == RecoveryMethodTag::HopDistance);
}

TEST_CASE("recovery mode names") {
  CHECK(parse_recovery_mode("mp") == RecoveryMode::MpOnly);
  CHECK(parse_recovery_mode("hb") == RecoveryMode::HbOnly);
  CHECK(parse_recovery_mode("adaptive") == RecoveryMode::Adaptive);
  CHECK_THROWS_AS(parse_recovery_mode("magic"), std::runtime_error);
  CHECK(std::string(to_string(RecoveryMode::MpOnly)) == "mp");
  CHECK(std::string(to_string(RecoveryMode::HbOnly)) == "hb");
  CHECK(std::string(to_string(RecoveryMode::Adaptive)) == "adaptive");
}

namespace {

NeighborEntry entry(int id, int hop, double rssi, SimTime seen) {
  NeighborEntry e;
  e.id = id;
  e.hop = hop;
  e.rssi_db = rssi;
  e.last_seen = seen;
  return e;
}

}  // namespace

TEST_CASE("hb_select wants fresh entries and the lowest hop") {
  std::map<int, NeighborEntry> t;
  t[2] = entry(2, 1, -60, SimTime::sec(10));
  t[3] = entry(3, 2, -50, SimTime::sec(10));
  t[4] = entry(4, 1, -55, SimTime::sec(3));  // stale

  auto pick = hb_select(t, SimTime::sec(5), {});
  REQUIRE(pick.has_value());
  CHECK(*pick == 2);

  // freshness window moved: nothing qualifies
  CHECK(!hb_select(t, SimTime::sec(11), {}).has_value());

  // exclusion forces the next hop level
  pick = hb_select(t, SimTime::sec(5), {2});
  REQUIRE(pick.has_value());
  CHECK(*pick == 3);
}

TEST_CASE("hb_select tie-breaks by rssi then id") {
  std::map<int, NeighborEntry> t;
  t[2] = entry(2, 1, -70, SimTime::sec(10));
  t[3] = entry(3, 1, -50, SimTime::sec(10));
  auto pick = hb_select(t, SimTime::sec(0), {});
  REQUIRE(pick.has_value());
  CHECK(*pick == 3);  // stronger signal

  t[3].rssi_db = -70;
  pick = hb_select(t, SimTime::sec(0), {});
  REQUIRE(pick.has_value());
  CHECK(*pick == 2);  // equal signal, lower id
}
