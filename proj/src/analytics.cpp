#include "mmwmac/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "mmwmac/error.hpp"
#include "mmwmac/quadrature.hpp"

namespace mmwmac {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// (1 - e^-x) / x with its limit 1 at x = 0.
double one_minus_exp_over(double x) {
  if (x < 1e-10) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

// Probability of a LoS interferer from an annulus-free sector segment whose
// interferer and obstacle processes both span `area`.
double los_prob_mixed(double lambda_i, double lambda_o, double area) {
  if (lambda_i <= 0.0 || area <= 0.0) return 0.0;
  const double total = lambda_i + lambda_o;
  return lambda_i / total * -std::expm1(-total * area);
}

// log of Pr[no LoS interference] in a regular sector.
double log_clear_regular(double lambda_i, double lambda_o, double area) {
  const double p = los_prob_mixed(lambda_i, lambda_o, area);
  if (p < 0.5) return std::log1p(-p);
  const double total = lambda_i + lambda_o;
  return std::log((lambda_o + lambda_i * std::exp(-total * area)) / total);
}

// log of Pr[no LoS interference] in the tagged sector.
double log_clear_tagged(double lambda_i, double lambda_o, double area_link, double area_dmax) {
  if (lambda_i <= 0.0) return 0.0;
  const double annulus = los_prob_mixed(lambda_i, lambda_o, area_dmax - area_link);
  const double tail = annulus < 0.5
                          ? std::log1p(-annulus)
                          : std::log((lambda_o + lambda_i * std::exp(-(lambda_i + lambda_o) *
                                                                      (area_dmax - area_link))) /
                                     (lambda_i + lambda_o));
  return -lambda_i * area_link + tail;
}

void check_length(double ell, double dmax) {
  if (!(ell >= 0.0 && ell <= dmax)) {
    std::ostringstream msg;
    msg << "link length " << ell << " m outside [0, " << dmax << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double conditional_los_prob_nonempty(double interferer_density, double obstacle_density,
                                     double sector_area) {
  require(interferer_density > 0.0 && obstacle_density > 0.0,
          "conditioning on non-empty sectors needs positive densities");
  require(sector_area > 0.0, "sector area must be positive");
  const double li = interferer_density * sector_area;
  const double lo = obstacle_density * sector_area;
  const double any_i = -std::expm1(-li);
  const double any_o = -std::expm1(-lo);
  const double inner = any_o / obstacle_density -
                       -std::expm1(-(li + lo)) / (interferer_density + obstacle_density);
  return obstacle_density * inner / (any_i * any_o);
}

double los_prob_regular_sector(double interferer_density, double obstacle_density,
                               double sector_area) {
  require(interferer_density >= 0.0 && obstacle_density >= 0.0 && sector_area >= 0.0,
          "densities and area must be non-negative");
  return los_prob_mixed(interferer_density, obstacle_density, sector_area);
}

double los_prob_tagged_sector(double interferer_density, double obstacle_density,
                              double area_link, double area_dmax) {
  require(interferer_density >= 0.0 && obstacle_density >= 0.0,
          "densities must be non-negative");
  require(area_link >= 0.0 && area_link <= area_dmax,
          "tagged sub-sector area must lie in [0, area at dmax]");
  return -std::expm1(log_clear_tagged(interferer_density, obstacle_density, area_link, area_dmax));
}

double collision_prob_given_length(double ell, const DerivedParams& d, double obstacle_density) {
  check_length(ell, d.dmax);
  const double li = d.interferer_density;
  if (li <= 0.0) return 0.0;
  const double area_dmax = d.sector_area_at(d.dmax);
  const double area_link = d.sector_area_at(ell);
  double log_clear = log_clear_tagged(li, obstacle_density, area_link, area_dmax);
  if (d.sector_count > 1) {
    log_clear += (d.sector_count - 1) * log_clear_regular(li, obstacle_density, area_dmax);
  }
  return -std::expm1(log_clear);
}

double collision_prob_given_length(double ell, const Scenario& s) {
  return collision_prob_given_length(ell, derive(s), s.obstacle_density);
}

CollisionResult collision_prob(const Scenario& s) {
  const DerivedParams d = derive(s);
  const double lambda_o = s.obstacle_density;
  CollisionResult out;
  out.dmax = d.dmax;
  out.lower_bound = collision_prob_given_length(0.0, d, lambda_o);
  out.upper_bound = collision_prob_given_length(d.dmax, d, lambda_o);
  const double dmax2 = d.dmax * d.dmax;
  const double avg = integrate(
      [&](double ell) {
        return collision_prob_given_length(ell, d, lambda_o) * 2.0 * ell / dmax2;
      },
      0.0, d.dmax);
  out.averaged = std::clamp(avg, out.lower_bound, out.upper_bound);
  return out;
}

namespace {

double success_prob(double ell, const DerivedParams& d, const Scenario& s) {
  check_length(ell, d.dmax);
  const double unblocked = std::exp(-s.obstacle_density * d.sector_area_at(ell));
  return s.tx_prob * unblocked * (1.0 - collision_prob_given_length(ell, d, s.obstacle_density));
}

}  // namespace

double success_prob_given_length(double ell, const Scenario& s) {
  return success_prob(ell, derive(s), s);
}

ThroughputReport aloha_throughput(const Scenario& s) {
  const DerivedParams d = derive(s);
  ThroughputReport r;
  r.protocol = Protocol::kAloha;
  r.lower_bound = success_prob(d.dmax, d, s);
  r.upper_bound = success_prob(0.0, d, s);
  const double dmax2 = d.dmax * d.dmax;
  const double per_link = integrate(
      [&](double ell) { return success_prob(ell, d, s) * 2.0 * ell / dmax2; }, 0.0, d.dmax);
  r.per_link = std::clamp(per_link, r.lower_bound, r.upper_bound);
  r.ase = (1.0 + s.region_area * s.tx_density) / s.region_area * r.per_link;
  return r;
}

ThroughputReport tdma_throughput(const Scenario& s) {
  const DerivedParams d = derive(s);
  const double share = one_minus_exp_over(s.tx_density * s.region_area);
  const double unblocked = one_minus_exp_over(s.obstacle_density * d.sector_area_at(d.dmax));
  ThroughputReport r;
  r.protocol = Protocol::kTdma;
  r.per_link = share * unblocked;
  r.lower_bound = r.per_link;
  r.upper_bound = share;
  r.ase = unblocked / s.region_area;
  return r;
}

DelayPmf::DelayPmf(double success_prob) : success_prob_(success_prob) {
  if (success_prob == 0.0) {
    throw DegenerateDelay("success probability is zero; expected delay is infinite");
  }
  require(success_prob > 0.0 && success_prob <= 1.0, "success probability must lie in (0, 1]");
}

double DelayPmf::pmf_at(std::uint64_t retransmissions) const {
  return success_prob_ * std::pow(1.0 - success_prob_, static_cast<double>(retransmissions));
}

double DelayPmf::mean_retransmissions() const {
  return (1.0 - success_prob_) / success_prob_;
}

DelayPmf aloha_delay_pmf(const Scenario& s) { return DelayPmf(aloha_throughput(s).per_link); }

DelayPmf aloha_delay_pmf(double ell, const Scenario& s) {
  return DelayPmf(success_prob_given_length(ell, s));
}

TxProbOptimum optimize_tx_prob(const Scenario& s) {
  Scenario work = s;
  auto objective = [&](double rho) {
    work.tx_prob = std::clamp(rho, 0.0, 1.0);
    return aloha_throughput(work).per_link;
  };

  constexpr int kGrid = 100;
  int best_i = 0;
  double best_v = -1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = objective(static_cast<double>(i) / kGrid);
    if (v >= best_v) {  // ties go to the larger probability
      best_v = v;
      best_i = i;
    }
  }

  // Golden-section refinement inside the bracketing grid cells.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(0, best_i - 1) / static_cast<double>(kGrid);
  double b = std::min(kGrid, best_i + 1) / static_cast<double>(kGrid);
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = objective(c);
  double fe = objective(e);
  while (b - a > 1e-6) {
    if (fc > fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = objective(e);
    }
  }
  const double refined = 0.5 * (a + b);
  const double refined_v = objective(refined);

  TxProbOptimum out;
  const double grid_rho = static_cast<double>(best_i) / kGrid;
  if (refined_v > best_v || (refined_v == best_v && refined > grid_rho)) {
    out.tx_prob = refined;
    out.throughput = refined_v;
  } else {
    out.tx_prob = grid_rho;
    out.throughput = best_v;
  }
  return out;
}

double min_distance_joint_density(double x, double y, std::uint64_t n, std::uint64_t m,
                                  double interferer_density, double obstacle_density,
                                  double sector_area, double dmax) {
  require(dmax > 0.0 && x >= 0.0 && x <= dmax && y >= 0.0 && y <= dmax,
          "distances must lie in [0, dmax]");
  require(n >= 1 && m >= 1, "counts must be at least one");
  require(interferer_density > 0.0 && obstacle_density > 0.0 && sector_area > 0.0,
          "densities and area must be positive");
  const double dmax2 = dmax * dmax;
  auto factor = [&](double r, std::uint64_t count, double density) {
    const double mean = density * sector_area;
    const double k = static_cast<double>(count);
    const double order_stat = 2.0 * k * r / dmax2 * std::pow(1.0 - r * r / dmax2, k - 1.0);
    // Zero-truncated Poisson mass, evaluated in log space for large counts.
    const double log_mass = -mean + k * std::log(mean) - std::lgamma(k + 1.0) -
                            std::log(-std::expm1(-mean));
    return order_stat * std::exp(log_mass);
  };
  return factor(x, n, interferer_density) * factor(y, m, obstacle_density);
}

namespace limits {

double collision_without_obstacles(const DerivedParams& d) {
  return -std::expm1(-d.interferer_density * d.sector_area_at(d.dmax) * d.sector_count);
}

double collision_dense_obstacles(double ell, const DerivedParams& d) {
  check_length(ell, d.dmax);
  return -std::expm1(-d.interferer_density * d.sector_area_at(ell));
}

double collision_vanishing_coherence(double beamwidth, const DerivedParams& d) {
  return -std::expm1(-d.interferer_density * d.dmax * d.dmax * beamwidth / 2.0);
}

double throughput_sparse(const Scenario& s) {
  const DerivedParams d = derive(s);
  return one_minus_exp_over(s.obstacle_density * d.sector_area_at(d.dmax));
}

}  // namespace limits

}  // namespace mmwmac
