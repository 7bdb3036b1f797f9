#pragma once

// Physical-layer parameterization shared by every engine: antenna pattern,
// channel, interference range, sector geometry and link-length law.
//
// Units are SI throughout (meters, watts, radians). Degree and milliwatt
// conversions happen only at the configuration boundary.

#include <cstdint>
#include <numbers>

namespace mmwmac {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Ideal sector pattern: constant gain inside the main lobe of width
/// `beamwidth`, constant `side_lobe` gain elsewhere.
struct AntennaPattern {
  double beamwidth = deg_to_rad(20.0);  // (0, 2pi]
  double side_lobe = 0.0;               // [0, 1)

  void validate() const;
};

/// Main-lobe gain fixed by total radiated power:
/// beamwidth * g + (2pi - beamwidth) * side_lobe = 2pi.
double main_lobe_gain(const AntennaPattern& pattern);

// Defaults describe a 60 GHz link: free-space attenuation at 1 m, thermal
// noise over 2.16 GHz with a 6 dB noise figure, and an SINR threshold chosen
// so that a 5 m link at 2.5 mW and 20 degrees has a ~15 m interference range.
struct Channel {
  double tx_power = 2.5e-3;              // W
  double ref_attenuation = 1.5815e-7;    // linear gain at 1 m
  double pathloss_exponent = 2.0;
  double sinr_threshold = 8.5;           // linear
  double noise_power = 3.42e-11;         // W
  double absorption_db_per_km = 16.0;    // 0 disables the exponential term

  void validate() const;
  /// Exponential absorption coefficient per meter (natural-log units).
  double absorption_per_m() const;
};

struct DmaxMode {
  enum class Kind { kFixed, kDerivedFromLength };
  Kind kind = Kind::kFixed;
  double fixed_m = 15.0;
  // Link length fed into the interference-range formula in derived mode.
  double reference_length_m = 5.0;

  static DmaxMode fixed(double meters) { return {Kind::kFixed, meters, 5.0}; }
  static DmaxMode derived(double reference_length) {
    return {Kind::kDerivedFromLength, 15.0, reference_length};
  }
};

struct Scenario {
  double tx_density = 1.0 / 9.0;            // links per m^2
  double obstacle_density = 0.0025;         // obstacles per m^2
  double tx_prob = 1.0;                     // slotted ALOHA activity
  double coherence_angle = deg_to_rad(5.0); // (0, beamwidth]
  double region_area = 100.0;               // m^2
  AntennaPattern antenna;
  Channel channel;
  DmaxMode dmax_mode;

  void validate() const;
};

/// Sector count ceil(theta / theta_c), snapping ratios within 1e-9
/// (relative) of an integer to that integer.
int sector_count(double beamwidth, double coherence_angle);

/// Area of a circle sector with the given angle and radius.
constexpr double sector_area(double angle, double radius) {
  return 0.5 * angle * radius * radius;
}

struct DerivedParams {
  double interferer_density = 0.0;  // rho_a * lambda_t * theta / 2pi
  double dmax = 0.0;
  int sector_count = 1;
  double coherence_angle = 0.0;

  double sector_area_at(double radius) const {
    return sector_area(coherence_angle, radius);
  }
};

/// Throws NoInterferenceRange in derived mode when the reference link is in
/// outage.
DerivedParams derive(const Scenario& s);

/// Largest distance at which an aligned line-of-sight interferer still
/// drives the SINR of a link of length `link_length` below threshold.
/// Closed form without absorption, bisection otherwise.
double interference_range(double link_length, const Channel& channel,
                          const AntennaPattern& pattern);

/// Root-finding route for the interference range; valid with or without
/// absorption. Exposed so both routes can be compared.
double interference_range_numeric(double link_length, const Channel& channel,
                                  const AntennaPattern& pattern);

/// Density 2l/dmax^2 of the distance between a receiver and a point placed
/// uniformly in a circle sector of radius dmax.
double link_length_density(double ell, double dmax);

}  // namespace mmwmac
