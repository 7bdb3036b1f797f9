#include "mmwmac/model.hpp"

#include <cmath>
#include <sstream>

#include "mmwmac/error.hpp"

namespace mmwmac {

namespace {

// Bracket for the absorption root search.
constexpr double kMaxRangeM = 1.0e4;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void AntennaPattern::validate() const {
  require(std::isfinite(beamwidth) && beamwidth > 0.0 && beamwidth <= kTwoPi,
          "beamwidth must lie in (0, 2pi]");
  require(std::isfinite(side_lobe) && side_lobe >= 0.0 && side_lobe < 1.0,
          "side-lobe gain must lie in [0, 1)");
}

double main_lobe_gain(const AntennaPattern& pattern) {
  pattern.validate();
  const double theta = pattern.beamwidth;
  return (kTwoPi - (kTwoPi - theta) * pattern.side_lobe) / theta;
}

void Channel::validate() const {
  require(tx_power > 0.0 && std::isfinite(tx_power), "tx power must be positive");
  require(ref_attenuation > 0.0 && std::isfinite(ref_attenuation),
          "reference attenuation must be positive");
  require(pathloss_exponent > 0.0 && std::isfinite(pathloss_exponent),
          "path-loss exponent must be positive");
  require(sinr_threshold > 0.0 && std::isfinite(sinr_threshold),
          "SINR threshold must be positive");
  require(noise_power >= 0.0 && std::isfinite(noise_power),
          "noise power must be non-negative");
  require(absorption_db_per_km >= 0.0 && std::isfinite(absorption_db_per_km),
          "absorption must be non-negative");
}

double Channel::absorption_per_m() const {
  // x dB/km -> exp(-c d) with c = x ln(10) / 10 / 1000.
  return absorption_db_per_km * std::log(10.0) / 10.0 / 1000.0;
}

void Scenario::validate() const {
  require(std::isfinite(tx_density) && tx_density >= 0.0, "tx_density must be >= 0");
  require(std::isfinite(obstacle_density) && obstacle_density >= 0.0,
          "obstacle density must be >= 0");
  require(tx_prob >= 0.0 && tx_prob <= 1.0, "tx_prob must lie in [0, 1]");
  require(std::isfinite(region_area) && region_area > 0.0, "region_area must be positive");
  antenna.validate();
  channel.validate();
  require(coherence_angle > 0.0 && coherence_angle <= antenna.beamwidth * (1.0 + 1e-12),
          "coherence angle must lie in (0, beamwidth]");
  if (dmax_mode.kind == DmaxMode::Kind::kFixed) {
    require(std::isfinite(dmax_mode.fixed_m) && dmax_mode.fixed_m > 0.0,
            "fixed interference range must be positive");
  } else {
    require(std::isfinite(dmax_mode.reference_length_m) && dmax_mode.reference_length_m > 0.0,
            "reference link length must be positive");
  }
}

int sector_count(double beamwidth, double coherence_angle) {
  require(beamwidth > 0.0 && coherence_angle > 0.0, "angles must be positive");
  const double ratio = beamwidth / coherence_angle;
  require(ratio <= 2e9, "beamwidth / coherence_angle must not exceed 2e9");
  const double nearest = std::round(ratio);
  if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * ratio) {
    return static_cast<int>(nearest);
  }
  return static_cast<int>(std::ceil(ratio));
}

DerivedParams derive(const Scenario& s) {
  s.validate();
  DerivedParams d;
  d.interferer_density = s.tx_prob * s.tx_density * s.antenna.beamwidth / kTwoPi;
  d.dmax = s.dmax_mode.kind == DmaxMode::Kind::kFixed
               ? s.dmax_mode.fixed_m
               : interference_range(s.dmax_mode.reference_length_m, s.channel, s.antenna);
  d.sector_count = sector_count(s.antenna.beamwidth, s.coherence_angle);
  d.coherence_angle = s.coherence_angle;
  return d;
}

double interference_range(double link_length, const Channel& channel,
                          const AntennaPattern& pattern) {
  channel.validate();
  if (channel.absorption_db_per_km > 0.0) {
    return interference_range_numeric(link_length, channel, pattern);
  }
  require(link_length > 0.0 && std::isfinite(link_length), "link length must be positive");
  const double g = main_lobe_gain(pattern);
  const double base =
      std::pow(link_length, -channel.pathloss_exponent) / channel.sinr_threshold -
      channel.noise_power / (channel.tx_power * channel.ref_attenuation) / (g * g);
  if (!(base > 0.0)) {
    std::ostringstream msg;
    msg << "link of length " << link_length << " m is noise-limited below the SINR threshold";
    throw NoInterferenceRange(msg.str());
  }
  return std::pow(base, -1.0 / channel.pathloss_exponent);
}

double interference_range_numeric(double link_length, const Channel& channel,
                                  const AntennaPattern& pattern) {
  channel.validate();
  require(link_length > 0.0 && std::isfinite(link_length), "link length must be positive");
  const double g = main_lobe_gain(pattern);
  const double c = channel.absorption_per_m();
  const double alpha = channel.pathloss_exponent;
  const double scale = g * g * channel.tx_power * channel.ref_attenuation;

  const double signal = scale * std::pow(link_length, -alpha) * std::exp(-c * link_length);
  // Interference power at which SINR hits the threshold exactly.
  const double target = signal / channel.sinr_threshold - channel.noise_power;
  if (!(target > 0.0)) {
    std::ostringstream msg;
    msg << "link of length " << link_length << " m is noise-limited below the SINR threshold";
    throw NoInterferenceRange(msg.str());
  }
  const double log_target = std::log(target);
  // Positive while an interferer at distance d is still strong enough.
  auto excess = [&](double d) {
    return std::log(scale) - alpha * std::log(d) - c * d - log_target;
  };
  if (excess(kMaxRangeM) > 0.0) {
    throw NumericalError("interference range exceeds the 10 km search bracket");
  }
  double lo = 0.0;
  double hi = kMaxRangeM;
  for (int i = 0; i < 400 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double link_length_density(double ell, double dmax) {
  require(dmax > 0.0 && std::isfinite(dmax), "dmax must be positive");
  require(ell >= 0.0 && ell <= dmax, "link length outside [0, dmax]");
  return 2.0 * ell / (dmax * dmax);
}

}  // namespace mmwmac
