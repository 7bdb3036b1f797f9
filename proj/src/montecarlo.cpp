#include "mmwmac/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmwmac/error.hpp"
#include "mmwmac/parallel.hpp"

namespace mmwmac {

namespace {

// Trials per work unit. Fixed so that the partition never depends on the
// worker count.
constexpr std::uint64_t kChunk = 4096;

double nearest(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::infinity()
                   : *std::min_element(v.begin(), v.end());
}

Estimate make_estimate(std::uint64_t hits, std::uint64_t trials, std::uint64_t seed) {
  Estimate e;
  e.hits = hits;
  e.trials = trials;
  e.seed = seed;
  e.mean = static_cast<double>(hits) / static_cast<double>(trials);
  e.std_error = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
  return e;
}

template <class Trial>
std::uint64_t count_hits(std::uint64_t trials, unsigned workers, Trial&& trial) {
  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, workers, [&](std::size_t c) {
    SectorSample scratch;
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(trials, begin + kChunk);
    std::uint64_t local = 0;
    for (std::uint64_t t = begin; t < end; ++t) local += trial(t, scratch) ? 1 : 0;
    hits[c] = local;
  });
  return std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
}

}  // namespace

bool SectorSample::has_los_interferer() const {
  if (interferers.empty()) return false;
  return nearest(interferers) < nearest(obstacles);
}

void sample_sector(double interferer_density, double obstacle_density, double sector_area,
                   double dmax, CounterRng& rng, SectorSample& out) {
  out.interferers.clear();
  out.obstacles.clear();
  const std::uint64_t n = rng.poisson(interferer_density * sector_area);
  for (std::uint64_t i = 0; i < n; ++i) out.interferers.push_back(dmax * std::sqrt(rng.uniform()));
  const std::uint64_t m = rng.poisson(obstacle_density * sector_area);
  for (std::uint64_t i = 0; i < m; ++i) out.obstacles.push_back(dmax * std::sqrt(rng.uniform()));
}

void sample_tagged_sector(double interferer_density, double obstacle_density,
                          double coherence_angle, double link_length, double dmax,
                          CounterRng& rng, SectorSample& out) {
  out.interferers.clear();
  out.obstacles.clear();
  const double area_dmax = sector_area(coherence_angle, dmax);
  const double area_annulus = area_dmax - sector_area(coherence_angle, link_length);
  const std::uint64_t n = rng.poisson(interferer_density * area_dmax);
  for (std::uint64_t i = 0; i < n; ++i) out.interferers.push_back(dmax * std::sqrt(rng.uniform()));
  const std::uint64_t m = rng.poisson(obstacle_density * area_annulus);
  const double l2 = link_length * link_length;
  const double span = dmax * dmax - l2;
  for (std::uint64_t i = 0; i < m; ++i) {
    // Inverse CDF of the radial law truncated to (L, dmax]; max() guards
    // the rounding of sqrt at the lower edge.
    out.obstacles.push_back(std::max(link_length, std::sqrt(l2 + span * rng.uniform())));
  }
}

Estimate estimate_sector_los_prob(const Scenario& s, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers) {
  if (trials == 0) throw DomainError("trials must be at least 1");
  const DerivedParams d = derive(s);
  const double area = d.sector_area_at(d.dmax);
  const std::uint64_t hits = count_hits(trials, workers, [&](std::uint64_t t, SectorSample& smp) {
    CounterRng rng(seed, t);
    sample_sector(d.interferer_density, s.obstacle_density, area, d.dmax, rng, smp);
    return smp.has_los_interferer();
  });
  return make_estimate(hits, trials, seed);
}

Estimate estimate_collision_prob(const Scenario& s, std::optional<double> given_length,
                                 std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw DomainError("trials must be at least 1");
  const DerivedParams d = derive(s);
  if (given_length && !(*given_length >= 0.0 && *given_length <= d.dmax)) {
    throw DomainError("given link length outside [0, dmax]");
  }
  const double area = d.sector_area_at(d.dmax);
  const std::uint64_t hits = count_hits(trials, workers, [&](std::uint64_t t, SectorSample& smp) {
    CounterRng rng(seed, t);
    const double length = given_length ? *given_length : d.dmax * std::sqrt(rng.uniform());
    sample_tagged_sector(d.interferer_density, s.obstacle_density, d.coherence_angle, length,
                         d.dmax, rng, smp);
    if (smp.has_los_interferer()) return true;
    for (int k = 1; k < d.sector_count; ++k) {
      sample_sector(d.interferer_density, s.obstacle_density, area, d.dmax, rng, smp);
      if (smp.has_los_interferer()) return true;
    }
    return false;
  });
  return make_estimate(hits, trials, seed);
}

}  // namespace mmwmac
