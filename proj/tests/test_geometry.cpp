#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "mmwmac/geometry.hpp"
#include "mmwmac/model.hpp"
#include "mmwmac/rng.hpp"

using namespace mmwmac;

namespace {

// Solves p + t (p2 - p) = q + u (q2 - q). Returns nullopt for (near) parallel
// segments or when the crossing sits within `margin` of an endpoint, where
// the answer is too sensitive to rounding to serve as a reference.
std::optional<bool> parametric_intersect(const Segment& p, const Segment& q, double margin) {
  const Point r = p.b - p.a, s = q.b - q.a, w = q.a - p.a;
  const double den = r.x * s.y - r.y * s.x;
  if (std::abs(den) < 1e-9) return std::nullopt;
  const double t = (w.x * s.y - w.y * s.x) / den;
  const double u = (w.x * r.y - w.y * r.x) / den;
  auto near_edge = [&](double v) { return std::abs(v) < margin || std::abs(v - 1) < margin; };
  if (near_edge(t) || near_edge(u)) return std::nullopt;
  return t > 0 && t < 1 && u > 0 && u < 1;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("segment intersection basics") {
  CHECK(segments_intersect({{0, 0}, {2, 2}}, {{0, 2}, {2, 0}}));
  CHECK_FALSE(segments_intersect({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
  CHECK(segments_intersect({{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}));  // shared endpoint
  CHECK(segments_intersect({{0, 0}, {2, 0}}, {{1, 0}, {3, 0}}));  // collinear overlap
  CHECK_FALSE(segments_intersect({{0, 0}, {1, 0}}, {{2, 0}, {3, 0}}));
  CHECK(segments_intersect({{0, 0}, {2, 0}}, {{1, -1}, {1, 0}}));  // T junction
}

TEST_CASE("line of sight") {
  const std::vector<Segment> none;
  CHECK(los_test({0, 0}, {5, 0}, none));
  const std::vector<Segment> wall{{{2, -1}, {2, 1}}};
  CHECK_FALSE(los_test({0, 0}, {5, 0}, wall));
  CHECK(los_test({0, 0}, {1.5, 0}, wall));
  const std::vector<Segment> touching{{{2, 0}, {2, 1}}};
  CHECK_FALSE(los_test({0, 0}, {5, 0}, touching));
}

TEST_CASE("intersection agrees with a parametric solver") {
  CounterRng rng(99, 0);
  int compared = 0;
  for (int i = 0; i < 1000; ++i) {
    auto pt = [&] { return Point{rng.uniform(0, 10), rng.uniform(0, 10)}; };
    const Segment p{pt(), pt()}, q{pt(), pt()};
    const auto ref = parametric_intersect(p, q, 1e-9);
    if (!ref) continue;
    ++compared;
    REQUIRE(segments_intersect(p, q) == *ref);
    const std::vector<Segment> obstacles{q};
    REQUIRE(los_test(p.a, p.b, obstacles) == !*ref);
  }
  CHECK(compared > 990);
}

TEST_CASE("angles and main lobes") {
  CHECK(relative_angle({1, 0}, 0.0) == doctest::Approx(0.0));
  CHECK(relative_angle({0, 1}, 0.0) == doctest::Approx(std::numbers::pi / 2));
  CHECK(relative_angle({-1, -1e-12}, 0.0) == doctest::Approx(-std::numbers::pi));
  CHECK(relative_angle({1, 0}, 3 * std::numbers::pi / 2) == doctest::Approx(std::numbers::pi / 2));

  const double bw = deg_to_rad(20);
  CHECK(in_main_lobe({0, 0}, 0.0, bw, {10, 0}));
  CHECK(in_main_lobe({0, 0}, 0.0, bw, {10, 10 * std::tan(deg_to_rad(9.99))}));
  CHECK_FALSE(in_main_lobe({0, 0}, 0.0, bw, {10, 10 * std::tan(deg_to_rad(10.01))}));
  CHECK_FALSE(in_main_lobe({0, 0}, 0.0, bw, {-10, 0}));
  CHECK(in_main_lobe({1, 1}, std::numbers::pi, bw, {-3, 1.2}));
}

}  // TEST_SUITE
