#pragma once

#include <cmath>
#include <span>

namespace mmwmac {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Segment {
  Point a;
  Point b;
};

/// Closed-segment intersection via orientation tests; touching endpoints and
/// collinear overlaps count as intersecting.
bool segments_intersect(const Segment& p, const Segment& q);

/// True iff the straight path a-b crosses none of the obstacle segments.
bool los_test(Point a, Point b, std::span<const Segment> obstacles);

/// Signed angle of `v` relative to `axis`, wrapped to (-pi, pi].
double relative_angle(Point v, double axis);

/// True iff `target` lies inside the main lobe of an antenna at `origin`
/// pointing along `axis` (boundary included).
bool in_main_lobe(Point origin, double axis, double beamwidth, Point target);

}  // namespace mmwmac
