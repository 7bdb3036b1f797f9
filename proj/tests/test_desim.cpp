#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include "mmwmac/analytics.hpp"
#include "mmwmac/desim.hpp"
#include "mmwmac/error.hpp"
#include "oracles.hpp"

using namespace mmwmac;

namespace {

Link make_link(Point tx, Point rx, std::uint32_t id) {
  Link l;
  l.tx = tx;
  l.rx = rx;
  l.tx_axis = std::atan2(rx.y - tx.y, rx.x - tx.x);
  l.rx_axis = std::atan2(tx.y - rx.y, tx.x - rx.x);
  l.receiver_id = id;
  return l;
}

// n vertical links 20 m apart: no pair is within the interference range.
PlanarTopology separated_links(std::size_t n) {
  PlanarTopology t;
  t.region = {20.0 * static_cast<double>(n) + 20.0, 30.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 10.0 + 20.0 * static_cast<double>(i);
    t.links.push_back(make_link({x, 10}, {x, 15}, static_cast<std::uint32_t>(i)));
  }
  return t;
}

// Two head-on links whose transmitters hit each other's receivers.
PlanarTopology conflicting_pair() {
  PlanarTopology t;
  t.region = {20, 20};
  t.links.push_back(make_link({10, 5}, {5, 5}, 0));
  t.links.push_back(make_link({12, 5.1}, {2, 5.1}, 1));
  return t;
}

MacConfig saturated(MacKind kind, double rho = 1.0) {
  MacConfig m;
  m.protocol = kind;
  m.tx_prob = rho;
  m.saturated = true;
  return m;
}

// Upper-tail probability of a chi-square statistic.
double chi_square_p(double stat, int dof) { return boost::math::gamma_q(dof / 2.0, stat / 2.0); }

}  // namespace

TEST_SUITE("desim") {

TEST_CASE("link count is Poisson with the area mean") {
  Scenario s;
  s.tx_density = 0.44;
  s.obstacle_density = 0.0;
  const int builds = 10000;
  double sum = 0;
  for (int i = 0; i < builds; ++i) sum += static_cast<double>(build_topology(s, {}, i).links.size());
  CHECK(std::abs(sum / builds - 44.0) <= 3 * std::sqrt(44.0 / builds));
}

TEST_CASE("link lengths follow 2l/dmax^2 away from the boundary") {
  Scenario s;
  s.tx_density = 0.01;
  s.obstacle_density = 0.0;
  const PlanarTopology t = build_topology(s, {1000, 1000}, 3);
  std::vector<double> lengths;
  for (const Link& l : t.links) lengths.push_back(l.length());
  REQUIRE(lengths.size() > 5000);
  CHECK(oracle::ks_statistic(lengths, [](double l) { return l * l / 225.0; }) < 0.02);
}

TEST_CASE("topology invariants") {
  Scenario s;
  s.tx_density = 0.5;
  s.obstacle_density = 0.3;
  const PlanarTopology t = build_topology(s, {}, 17);
  CHECK(t.dmax == 15.0);
  for (std::size_t i = 0; i < t.links.size(); ++i) {
    const Link& l = t.links[i];
    REQUIRE(t.region.contains(l.rx));
    REQUIRE(l.length() <= 15.0);
    REQUIRE(in_main_lobe(l.tx, l.tx_axis, 1e-6, l.rx));
    REQUIRE(in_main_lobe(l.rx, l.rx_axis, 1e-6, l.tx));
    REQUIRE(l.receiver_id == i);
  }
  for (const Segment& o : t.obstacles) REQUIRE(distance(o.a, o.b) <= 1.0 + 1e-12);

  const PlanarTopology again = build_topology(s, {}, 17);
  REQUIRE(again.links.size() == t.links.size());
  CHECK(again.links.back().rx.x == t.links.back().rx.x);
  CHECK_THROWS_AS(build_topology(s, {0, 5}, 1), DomainError);
}

TEST_CASE("pairwise interference rules") {
  PlanarTopology t = conflicting_pair();
  CHECK(interferes(t, t.links[0], t.links[1]));
  CHECK(interferes(t, t.links[1], t.links[0]));
  CHECK_FALSE(interferes(t, t.links[0], t.links[0]));
  const std::vector<std::size_t> both{0, 1}, alone{0};
  CHECK(collision_check(t, 0, both));
  CHECK_FALSE(collision_check(t, 0, alone));

  // Out of range.
  t.dmax = 6.5;
  CHECK_FALSE(interferes(t, t.links[0], t.links[1]));
  t.dmax = 15;
  // A wall between the receivers shadows the interferer but not the link.
  t.obstacles.push_back({{3.5, 4}, {3.5, 6}});
  CHECK(link_unblocked(t, t.links[0]));
  CHECK_FALSE(interferes(t, t.links[1], t.links[0]));

  // Same intended receiver always collides.
  PlanarTopology shared = separated_links(2);
  shared.links[1].receiver_id = 0;
  CHECK(interferes(shared, shared.links[0], shared.links[1]));
  CHECK_FALSE(interferes(separated_links(2), separated_links(2).links[0], separated_links(2).links[1]));
}

TEST_CASE("coherence-sector blockage") {
  PlanarTopology t;
  t.region = {30, 30};
  t.blockage = BlockageModel::kCoherenceSectors;
  // Receiver at the origin side looking along +x; beam 20 deg, sectors 5 deg.
  t.links.push_back(make_link({20, 10}, {5, 10}, 0));
  CHECK(link_unblocked(t, t.links[0]));
  // Obstacle off the segment but in the link's sector and closer.
  t.obstacles.push_back({{10, 10.15}, {10, 10.25}});
  CHECK_FALSE(link_unblocked(t, t.links[0]));
  t.blockage = BlockageModel::kSegments;
  CHECK(link_unblocked(t, t.links[0]));
  // Farther than the transmitter: no effect.
  t.blockage = BlockageModel::kCoherenceSectors;
  t.obstacles[0] = {{22, 10.15}, {22, 10.25}};
  CHECK(link_unblocked(t, t.links[0]));
}

TEST_CASE("single ALOHA link under CBR") {
  const PlanarTopology t = separated_links(1);
  MacConfig m;
  const SimStats st = run(t, m, 0.2, 1);
  const double rate = m.cbr_bps * m.slot_us * 1e-6 / (m.packet_bytes * 8);
  CHECK(st.network_throughput == doctest::Approx(std::min(1.0, rate)).epsilon(1e-3));
  REQUIRE_FALSE(st.delay_samples.empty());
  for (double d : st.delay_samples) REQUIRE(d == 1.0);
  for (auto r : st.retransmissions) REQUIRE(r == 0);
}

TEST_CASE("saturated single link delivers every slot") {
  const SimStats st = run(separated_links(1), saturated(MacKind::kSlottedAloha), 0.05, 1);
  CHECK(st.network_throughput == doctest::Approx(1.0));
  CHECK(st.per_link[0].collided == 0);
}

TEST_CASE("TDMA shares the channel") {
  const std::size_t n = 5;
  const SimStats st = run(separated_links(n), saturated(MacKind::kTdma), 0.1, 2);
  CHECK(st.network_throughput == doctest::Approx(1.0));
  for (const LinkStats& l : st.per_link) {
    CHECK(static_cast<double>(l.delivered) / st.slots == doctest::Approx(1.0 / n));
    CHECK(l.collided == 0);
  }

  Scenario s;
  s.tx_density = 1.0;
  s.obstacle_density = 0.2;
  const PlanarTopology dense = build_topology(s, {}, 8);
  MacConfig m;
  m.protocol = MacKind::kTdma;
  const SimStats d = run(dense, m, 0.05, 3);
  for (const LinkStats& l : d.per_link) REQUIRE(l.collided == 0);
}

TEST_CASE("counter conservation") {
  Scenario s;
  s.tx_density = 0.5;
  s.obstacle_density = 0.11;
  const PlanarTopology t = build_topology(s, {}, 5);
  for (MacKind k : {MacKind::kSlottedAloha, MacKind::kTdma, MacKind::kCsma, MacKind::kCsmaCa}) {
    MacConfig m;
    m.protocol = k;
    m.tx_prob = 0.6;
    const SimStats st = run(t, m, 0.05, 9);
    std::uint64_t delivered = 0;
    for (const LinkStats& l : st.per_link) {
      const std::uint64_t done = l.delivered + l.collided + l.blocked;
      REQUIRE(done <= l.attempts);
      REQUIRE(l.attempts - done <= 1);  // at most one exchange still on the air
      if (k == MacKind::kSlottedAloha || k == MacKind::kTdma) REQUIRE(done == l.attempts);
      REQUIRE(l.delivered <= l.generated);
      delivered += l.delivered;
    }
    CHECK(st.delay_samples.size() == delivered);
    CHECK(st.retransmissions.size() == delivered);
    CHECK(st.network_throughput == doctest::Approx(static_cast<double>(delivered) / st.slots));
    CHECK(st.ase == doctest::Approx(st.network_throughput / 100.0));
  }
}

TEST_CASE("runs are deterministic in their seed") {
  Scenario s;
  s.tx_density = 1.0;
  s.obstacle_density = 0.11;
  const PlanarTopology t = build_topology(s, {}, 6);
  for (MacKind k : {MacKind::kSlottedAloha, MacKind::kCsma, MacKind::kCsmaCa}) {
    MacConfig m;
    m.protocol = k;
    m.tx_prob = 0.5;
    const SimStats a = run(t, m, 0.05, 42), b = run(t, m, 0.05, 42), c = run(t, m, 0.05, 43);
    CHECK(a.delay_samples == b.delay_samples);
    CHECK(a.retransmissions == b.retransmissions);
    CHECK(a.network_throughput == b.network_throughput);
    CHECK(a.delay_samples != c.delay_samples);
  }
}

TEST_CASE("ALOHA on a conflicting pair: throughput and geometric retransmissions") {
  const double rho = 0.5;
  const SimStats st = run(conflicting_pair(), saturated(MacKind::kSlottedAloha, rho), 1.0, 11);
  const double ps = rho * (1 - rho);
  for (const LinkStats& l : st.per_link) {
    const double thr = static_cast<double>(l.delivered) / st.slots;
    CHECK(std::abs(thr - ps) <= 3 * std::sqrt(ps * (1 - ps) / st.slots));
  }
  // Bins 0..9 and a tail bin, all with expected counts well above 5.
  const int bins = 11;
  std::vector<double> observed(bins, 0.0);
  for (auto r : st.retransmissions) observed[std::min<std::uint32_t>(r, bins - 1)] += 1;
  const double n = static_cast<double>(st.retransmissions.size());
  const DelayPmf pmf(ps);
  double stat = 0, tail = 1;
  for (int b = 0; b < bins; ++b) {
    const double p = b < bins - 1 ? pmf.pmf_at(b) : tail;
    tail -= p;
    stat += (observed[b] - n * p) * (observed[b] - n * p) / (n * p);
  }
  CHECK(chi_square_p(stat, bins - 1) > 0.01);
}

TEST_CASE("ALOHA mean retransmissions follow the per-link geometric law") {
  Scenario s;
  s.tx_density = 0.44;
  s.obstacle_density = 0.11;
  const double rho = 0.5;
  const PlanarTopology t = build_topology(s, {}, 12);
  const SimStats st = run(t, saturated(MacKind::kSlottedAloha, rho), 1.0, 13);
  // Expected pooled mean: links deliver in proportion to their success
  // probability rho (1 - rho)^(number of links that can kill them).
  double expected_failures = 0, expected_success = 0;
  for (const Link& victim : t.links) {
    if (!link_unblocked(t, victim)) continue;
    int killers = 0;
    for (const Link& other : t.links) killers += interferes(t, victim, other) ? 1 : 0;
    const double ps = rho * std::pow(1 - rho, killers);
    expected_success += ps;
    expected_failures += ps * DelayPmf(ps).mean_retransmissions();
  }
  const double expected = expected_failures / expected_success;
  const double observed =
      std::accumulate(st.retransmissions.begin(), st.retransmissions.end(), 0.0) /
      static_cast<double>(st.retransmissions.size());
  CHECK(observed == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("interior collision frequency matches the closed form") {
  // Receivers at least dmax from the edge see a complete interferer field
  // and links whose lengths follow 2l/dmax^2. Coherence-sector blockage
  // follows the analytic obstacle rule.
  Scenario s;
  s.tx_density = 0.11;
  s.obstacle_density = 0.11;
  const Region region{150, 150};
  int links = 0, collided = 0;
  double expected = 0;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const PlanarTopology t = build_topology(s, region, 100 + seed, BlockageModel::kCoherenceSectors);
    std::vector<std::size_t> all(t.links.size());
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < t.links.size(); ++i) {
      const Point rx = t.links[i].rx;
      if (rx.x < 15 || rx.y < 15 || rx.x > region.width - 15 || rx.y > region.height - 15) continue;
      if (!link_unblocked(t, t.links[i])) continue;
      ++links;
      collided += collision_check(t, i, all) ? 1 : 0;
      expected += collision_prob_given_length(t.links[i].length(), s);
    }
  }
  REQUIRE(links > 1000);
  CHECK(std::abs(static_cast<double>(collided) / links - expected / links) <= 0.03);
}

TEST_CASE("contention protocols at low load") {
  const PlanarTopology t = separated_links(1);
  MacConfig m;
  m.protocol = MacKind::kCsmaCa;
  const SimStats ca = run(t, m, 0.05, 1);
  const double expected = (csma_ca_cycle_us(m) + m.slot_us) / m.slot_us;
  REQUIRE_FALSE(ca.delay_samples.empty());
  for (double d : ca.delay_samples) REQUIRE(d == doctest::Approx(expected).epsilon(1e-4));
  m.protocol = MacKind::kCsma;
  const SimStats cs = run(t, m, 0.05, 1);
  for (double d : cs.delay_samples) REQUIRE(d == doctest::Approx((m.difs_us + m.slot_us) / m.slot_us).epsilon(1e-4));
}

TEST_CASE("contention on a conflicting pair") {
  for (MacKind k : {MacKind::kCsma, MacKind::kCsmaCa}) {
    const SimStats st = run(conflicting_pair(), saturated(k), 0.2, 4);
    for (const LinkStats& l : st.per_link) CHECK(l.delivered > 0);
    // Carrier sensing serializes the pair, so the total stays below one
    // packet per slot.
    CHECK(st.network_throughput < 1.0);
  }
}

TEST_CASE("timing arithmetic") {
  MacConfig m;
  const double ctrl = 30 * 8 / 27.7e6 * 1e6;
  CHECK(m.control_airtime_us() == doctest::Approx(ctrl));
  CHECK(csma_ca_cycle_us(m) == doctest::Approx(5.5 + 2 * ctrl + 2 * 2.5));
  m.include_ack = true;
  CHECK(csma_ca_cycle_us(m) == doctest::Approx(5.5 + 3 * ctrl + 3 * 2.5));
  m.include_ack = false;
  CHECK(csma_ca_utilization(m, 50) == doctest::Approx(50 / (50 + 5.5 + 2 * ctrl + 5)));
  CHECK_THROWS_AS(csma_ca_utilization(m, 0), ConfigError);
}

TEST_CASE("configuration errors") {
  const PlanarTopology t = separated_links(1);
  MacConfig m;
  m.tx_prob = 1.5;
  CHECK_THROWS_AS(run(t, m, 0.01, 1), ConfigError);
  m = MacConfig{};
  m.cw_max = 8;
  CHECK_THROWS_AS(run(t, m, 0.01, 1), ConfigError);
  m = MacConfig{};
  m.slot_us = 0;
  CHECK_THROWS_AS(run(t, m, 0.01, 1), ConfigError);
  CHECK_THROWS_AS(run(t, MacConfig{}, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(mac_kind_from_string("token_ring"), ConfigError);
  CHECK(mac_kind_from_string("csma_ca") == MacKind::kCsmaCa);
}

}  // TEST_SUITE
