#include <algorithm>
#include <cmath>
#include <numbers>

#include "mmwmac/desim.hpp"
#include "mmwmac/error.hpp"
#include "mmwmac/rng.hpp"

namespace mmwmac {

namespace {

constexpr std::uint64_t kLinkStream = 0;
constexpr std::uint64_t kObstacleStream = 1;
// Rejection cap for links whose receiver keeps landing outside the region.
constexpr int kMaxRedraws = 1 << 20;

Point midpoint(const Segment& s) { return 0.5 * (s.a + s.b); }

// Index of the coherence sector of `rel` (angle from the beam axis), counted
// from the clockwise beam edge. -1 when outside the beam.
int sector_of(double rel, double beamwidth, double coherence_angle, int sectors) {
  const double from_edge = rel + 0.5 * beamwidth;
  if (from_edge < 0.0 || from_edge > beamwidth) return -1;
  const int idx = static_cast<int>(std::floor(from_edge / coherence_angle));
  return std::min(idx, sectors - 1);
}

}  // namespace

PlanarTopology build_topology(const Scenario& s, const Region& region, std::uint64_t seed,
                              BlockageModel blockage) {
  if (!(region.width > 0.0 && region.height > 0.0)) {
    throw DomainError("region must have positive width and height");
  }
  const DerivedParams d = derive(s);
  PlanarTopology topo;
  topo.region = region;
  topo.beamwidth = s.antenna.beamwidth;
  topo.dmax = d.dmax;
  topo.coherence_angle = s.coherence_angle;
  topo.blockage = blockage;

  CounterRng link_rng(seed, kLinkStream);
  const std::uint64_t n_links = link_rng.poisson(s.tx_density * region.area());
  topo.links.reserve(n_links);
  for (std::uint64_t i = 0; i < n_links; ++i) {
    Link link;
    int tries = 0;
    for (;; ++tries) {
      if (tries == kMaxRedraws) {
        throw DomainError("region too small to place links of the drawn lengths");
      }
      link.tx = {link_rng.uniform(0.0, region.width), link_rng.uniform(0.0, region.height)};
      const double dir = link_rng.uniform(0.0, kTwoPi);
      const double len = d.dmax * std::sqrt(link_rng.uniform());
      link.rx = link.tx + len * Point{std::cos(dir), std::sin(dir)};
      if (region.contains(link.rx)) {
        link.tx_axis = dir;
        link.rx_axis = std::remainder(dir + std::numbers::pi, kTwoPi);
        break;
      }
    }
    link.receiver_id = static_cast<std::uint32_t>(i);
    topo.links.push_back(link);
  }

  CounterRng obstacle_rng(seed, kObstacleStream);
  const std::uint64_t n_obstacles = obstacle_rng.poisson(s.obstacle_density * region.area());
  topo.obstacles.reserve(n_obstacles);
  for (std::uint64_t i = 0; i < n_obstacles; ++i) {
    const Point c{obstacle_rng.uniform(0.0, region.width),
                  obstacle_rng.uniform(0.0, region.height)};
    const double phi = obstacle_rng.uniform(0.0, std::numbers::pi);
    const double half = 0.5 * obstacle_rng.uniform();
    const Point h{half * std::cos(phi), half * std::sin(phi)};
    topo.obstacles.push_back({c - h, c + h});
  }
  return topo;
}

bool reaches_receiver(const PlanarTopology& topo, const Link& victim, Point from) {
  if (topo.blockage == BlockageModel::kSegments) {
    return los_test(from, victim.rx, topo.obstacles);
  }
  const int sectors = sector_count(topo.beamwidth, topo.coherence_angle);
  const int target =
      sector_of(relative_angle(from - victim.rx, victim.rx_axis), topo.beamwidth,
                topo.coherence_angle, sectors);
  if (target < 0) return los_test(from, victim.rx, topo.obstacles);
  const double range = distance(from, victim.rx);
  for (const Segment& o : topo.obstacles) {
    const Point m = midpoint(o);
    const double r = distance(m, victim.rx);
    if (r >= range) continue;
    const int sec = sector_of(relative_angle(m - victim.rx, victim.rx_axis), topo.beamwidth,
                              topo.coherence_angle, sectors);
    if (sec == target) return false;
  }
  return true;
}

bool link_unblocked(const PlanarTopology& topo, const Link& link) {
  return reaches_receiver(topo, link, link.tx);
}

bool interferes(const PlanarTopology& topo, const Link& victim, const Link& other) {
  if (&victim == &other) return false;
  if (victim.receiver_id == other.receiver_id) return true;
  if (distance(other.tx, victim.rx) > topo.dmax) return false;
  if (!in_main_lobe(other.tx, other.tx_axis, topo.beamwidth, victim.rx)) return false;
  if (!in_main_lobe(victim.rx, victim.rx_axis, topo.beamwidth, other.tx)) return false;
  return reaches_receiver(topo, victim, other.tx);
}

bool collision_check(const PlanarTopology& topo, std::size_t receiver,
                     std::span<const std::size_t> active) {
  const Link& victim = topo.links.at(receiver);
  for (std::size_t j : active) {
    if (j == receiver) continue;
    if (interferes(topo, victim, topo.links.at(j))) return true;
  }
  return false;
}

}  // namespace mmwmac
