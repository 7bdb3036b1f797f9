#include "mmwmac/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace mmwmac {

namespace {

// Sign of the cross product (b - a) x (c - a).
int orientation(Point a, Point b, Point c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return (v > 0.0) - (v < 0.0);
}

// c is collinear with a-b; check it lies within the bounding box.
bool on_segment(Point a, Point b, Point c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(const Segment& p, const Segment& q) {
  const int o1 = orientation(p.a, p.b, q.a);
  const int o2 = orientation(p.a, p.b, q.b);
  const int o3 = orientation(q.a, q.b, p.a);
  const int o4 = orientation(q.a, q.b, p.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p.a, p.b, q.a)) return true;
  if (o2 == 0 && on_segment(p.a, p.b, q.b)) return true;
  if (o3 == 0 && on_segment(q.a, q.b, p.a)) return true;
  if (o4 == 0 && on_segment(q.a, q.b, p.b)) return true;
  return false;
}

bool los_test(Point a, Point b, std::span<const Segment> obstacles) {
  const Segment path{a, b};
  return std::none_of(obstacles.begin(), obstacles.end(),
                      [&](const Segment& o) { return segments_intersect(path, o); });
}

double relative_angle(Point v, double axis) {
  double rel = std::atan2(v.y, v.x) - axis;
  rel = std::remainder(rel, 2.0 * std::numbers::pi);
  if (rel <= -std::numbers::pi) rel += 2.0 * std::numbers::pi;
  return rel;
}

bool in_main_lobe(Point origin, double axis, double beamwidth, Point target) {
  if (beamwidth >= 2.0 * std::numbers::pi) return true;
  return std::abs(relative_angle(target - origin, axis)) <= 0.5 * beamwidth;
}

}  // namespace mmwmac
