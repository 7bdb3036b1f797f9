#pragma once

// Monte Carlo oracle for the sectored blockage model. It samples interferer
// and obstacle counts and radial distances directly and never evaluates a
// closed form.

#include <cstdint>
#include <optional>
#include <vector>

#include "mmwmac/model.hpp"
#include "mmwmac/rng.hpp"

namespace mmwmac {

/// Radial distances of interferers and obstacles in one coherence sector.
struct SectorSample {
  std::vector<double> interferers;
  std::vector<double> obstacles;

  /// True when the nearest interferer is strictly closer than the nearest
  /// obstacle. Equal distances count as blocked.
  bool has_los_interferer() const;
};

/// Draws Poisson counts with means density * sector_area and distances with
/// CDF r^2 / dmax^2. Reuses the storage in `out`.
void sample_sector(double interferer_density, double obstacle_density, double sector_area,
                   double dmax, CounterRng& rng, SectorSample& out);

/// Tagged-sector variant: interferers over (0, dmax], obstacles restricted
/// to (link_length, dmax] because the tagged link is established.
void sample_tagged_sector(double interferer_density, double obstacle_density,
                          double coherence_angle, double link_length, double dmax,
                          CounterRng& rng, SectorSample& out);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sqrt(mean (1 - mean) / trials)
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t hits = 0;
};

/// Fraction of regular sectors that contain a LoS interferer.
Estimate estimate_sector_los_prob(const Scenario& s, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers = 1);

/// Fraction of trials in which any of the k sectors delivers a LoS
/// interferer. Without `given_length` the link length is drawn from
/// 2l/dmax^2 per trial.
Estimate estimate_collision_prob(const Scenario& s, std::optional<double> given_length,
                                 std::uint64_t trials, std::uint64_t seed, unsigned workers = 1);

}  // namespace mmwmac
