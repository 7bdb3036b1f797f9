#include <doctest.h>

#include <cmath>

#include "mmwmac/analytics.hpp"
#include "mmwmac/error.hpp"
#include "mmwmac/montecarlo.hpp"
#include "oracles.hpp"

using namespace mmwmac;

TEST_SUITE("montecarlo") {

TEST_CASE("Poisson sampler moments") {
  for (double mean : {0.3, 4.4, 29.0, 75.0, 1000.0}) {
    CounterRng rng(77, static_cast<std::uint64_t>(mean * 10));
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      sum += k;
      sq += k * k;
    }
    const double m = sum / n, var = sq / n - m * m;
    CHECK(std::abs(m - mean) <= 3 * std::sqrt(mean / n));
    CHECK(var == doctest::Approx(mean).epsilon(0.03));
  }
  CounterRng rng(1, 1);
  CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("streams are reproducible and distinct") {
  CounterRng a(5, 9), b(5, 9), c(5, 10);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    REQUIRE(x == b());
    REQUIRE(x != c());
  }
}

TEST_CASE("empty interferer field") {
  Scenario s;
  s.tx_prob = 0.0;
  CounterRng rng(3, 3);
  SectorSample smp;
  for (int i = 0; i < 1000; ++i) {
    sample_sector(0.0, s.obstacle_density, 9.8, 15, rng, smp);
    REQUIRE(smp.interferers.empty());
    REQUIRE_FALSE(smp.has_los_interferer());
  }
  const Estimate e = estimate_collision_prob(s, std::nullopt, 10000, 1);
  CHECK(e.mean == 0.0);
  CHECK(e.hits == 0);
}

TEST_CASE("counts and radial law") {
  const double li = 0.2, lo = 0.05, area = 9.8, dmax = 15;
  CounterRng rng(21, 0);
  SectorSample smp;
  const int n = 100000;
  double count = 0;
  std::vector<double> radii;
  for (int i = 0; i < n; ++i) {
    sample_sector(li, lo, area, dmax, rng, smp);
    count += static_cast<double>(smp.interferers.size());
    if (!smp.interferers.empty()) radii.push_back(smp.interferers.front());
  }
  CHECK(std::abs(count / n - li * area) <= 3 * std::sqrt(li * area / n));
  const double d = oracle::ks_statistic(radii, [&](double r) { return r * r / (dmax * dmax); });
  CHECK(d < 0.01);
}

TEST_CASE("ties count as blocked") {
  SectorSample smp;
  smp.interferers = {3.0, 5.0};
  smp.obstacles = {3.0};
  CHECK_FALSE(smp.has_los_interferer());
  smp.obstacles = {3.0000001};
  CHECK(smp.has_los_interferer());
  smp.obstacles.clear();
  CHECK(smp.has_los_interferer());
}

TEST_CASE("tagged sector keeps the link clear") {
  CounterRng rng(31, 0);
  SectorSample smp;
  for (int i = 0; i < 100000; ++i) {
    sample_tagged_sector(0.1, 2.0, deg_to_rad(5), 6.0, 15.0, rng, smp);
    for (double y : smp.obstacles) REQUIRE(y >= 6.0);
  }
}

TEST_CASE("sector LoS estimate without obstacles") {
  Scenario s;
  s.obstacle_density = 0.0;
  const Estimate e = estimate_sector_los_prob(s, 200000, 4);
  const DerivedParams d = derive(s);
  const double exact = 1 - std::exp(-d.interferer_density * d.sector_area_at(d.dmax));
  CHECK(std::abs(e.mean - exact) <= 3 * e.std_error);
}

TEST_CASE("estimates agree with the closed forms") {
  // 24 comparisons: a 4-sigma band keeps the family-wise false alarm rate
  // below 0.2%. A degenerate estimate (0 or 1) borrows the binomial error of
  // the closed form.
  auto agrees = [](const Estimate& e, double p) {
    const double se = e.std_error > 0 ? e.std_error : std::sqrt(p * (1 - p) / e.trials);
    return std::abs(e.mean - p) <= 4 * se;
  };
  CounterRng pick(40, 0);
  for (int i = 0; i < 8; ++i) {
    Scenario s;
    s.tx_density = std::exp(pick.uniform(std::log(0.05), std::log(4.0)));
    s.obstacle_density = std::exp(pick.uniform(std::log(0.0025), std::log(1.0)));
    s.antenna.beamwidth = deg_to_rad(10.0 * (1 + static_cast<int>(pick.uniform(0, 4))));
    const Estimate los = estimate_sector_los_prob(s, 100000, 100 + i);
    const DerivedParams d = derive(s);
    CHECK(agrees(los, los_prob_regular_sector(d.interferer_density, s.obstacle_density,
                                              d.sector_area_at(d.dmax))));
    CHECK(agrees(estimate_collision_prob(s, std::nullopt, 100000, 200 + i), collision_prob(s).averaged));
    CHECK(agrees(estimate_collision_prob(s, 5.0, 100000, 300 + i), collision_prob_given_length(5.0, s)));
  }
}

TEST_CASE("estimates do not depend on the worker count") {
  Scenario s;
  s.obstacle_density = 0.11;
  s.tx_density = 0.7;
  const Estimate a = estimate_collision_prob(s, std::nullopt, 50000, 9, 1);
  const Estimate b = estimate_collision_prob(s, std::nullopt, 50000, 9, 4);
  CHECK(a.hits == b.hits);
  CHECK(a.mean == b.mean);
  CHECK(estimate_sector_los_prob(s, 30001, 2, 1).hits == estimate_sector_los_prob(s, 30001, 2, 3).hits);
}

TEST_CASE("argument checks") {
  Scenario s;
  CHECK_THROWS_AS(estimate_collision_prob(s, 20.0, 10, 1), DomainError);
  CHECK_THROWS_AS(estimate_sector_los_prob(s, 0, 1), DomainError);
}

}  // TEST_SUITE
