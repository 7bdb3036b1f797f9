#pragma once

// Closed-form collision, throughput, area spectral efficiency and delay
// model for directional slotted ALOHA and TDMA under the coherence-angle
// blockage model.

#include <cstdint>

#include "mmwmac/model.hpp"

namespace mmwmac {

/// Pr[nearest interferer closer than nearest obstacle | both counts >= 1] in
/// a sector of the given area. Requires positive densities and area.
double conditional_los_prob_nonempty(double interferer_density, double obstacle_density,
                                     double sector_area);

/// Probability of at least one LoS interferer from a sector that does not
/// hold the tagged transmitter.
double los_prob_regular_sector(double interferer_density, double obstacle_density,
                               double sector_area);

/// Same for the tagged sector, which is obstacle-free up to the link length.
double los_prob_tagged_sector(double interferer_density, double obstacle_density,
                              double area_link, double area_dmax);

/// Collision probability of a link of length `ell` (the link is assumed
/// established, i.e. not blocked).
double collision_prob_given_length(double ell, const Scenario& s);
double collision_prob_given_length(double ell, const DerivedParams& d,
                                   double obstacle_density);

struct CollisionResult {
  double averaged = 0.0;
  double lower_bound = 0.0;  // conditional at ell = 0
  double upper_bound = 0.0;  // conditional at ell = dmax
  double dmax = 0.0;
};

CollisionResult collision_prob(const Scenario& s);

/// Per-slot success probability of a link of length `ell`: active, not
/// blocked, not collided.
double success_prob_given_length(double ell, const Scenario& s);

enum class Protocol { kAloha, kTdma };

struct ThroughputReport {
  double per_link = 0.0;     // packets/slot
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double ase = 0.0;          // packets/slot/m^2
  Protocol protocol = Protocol::kAloha;
};

ThroughputReport aloha_throughput(const Scenario& s);

/// TDMA over the region: exact per-link throughput, with the blockage-free
/// bound as upper_bound.
ThroughputReport tdma_throughput(const Scenario& s);

/// Geometric law of the number of retransmissions before success.
class DelayPmf {
 public:
  explicit DelayPmf(double success_prob);

  double success_prob() const { return success_prob_; }
  double pmf_at(std::uint64_t retransmissions) const;
  double mean_retransmissions() const;

 private:
  double success_prob_;
};

/// Delay law using the averaged success probability (per-link throughput).
DelayPmf aloha_delay_pmf(const Scenario& s);
/// Delay law of a link of known length.
DelayPmf aloha_delay_pmf(double ell, const Scenario& s);

struct TxProbOptimum {
  double tx_prob = 1.0;
  double throughput = 0.0;
};

/// Maximizes ALOHA per-link throughput over the transmission probability.
/// The scenario's own tx_prob is ignored.
TxProbOptimum optimize_tx_prob(const Scenario& s);

/// Joint density of (nearest interferer distance, nearest obstacle distance,
/// interferer count, obstacle count) given both counts >= 1, with radial law
/// 2x/dmax^2 in a sector of the given area.
double min_distance_joint_density(double x, double y, std::uint64_t n, std::uint64_t m,
                                  double interferer_density, double obstacle_density,
                                  double sector_area, double dmax);

// Documented limits of the conditional collision probability.
namespace limits {

/// No obstacles: 1 - exp(-lambda_I * A_dmax * k).
double collision_without_obstacles(const DerivedParams& d);
/// Obstacle density to infinity: only the obstacle-free part of the tagged
/// sector can interfere.
double collision_dense_obstacles(double ell, const DerivedParams& d);
/// Vanishing coherence angle with the ceiling relaxed: independent LoS events.
double collision_vanishing_coherence(double beamwidth, const DerivedParams& d);

/// Common lambda_t -> 0 throughput of ALOHA (at tx_prob 1) and TDMA.
double throughput_sparse(const Scenario& s);

}  // namespace limits

}  // namespace mmwmac
