#include "mmwmac/mmwmac.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>


#include "mmwmac/analytics.hpp"
#include "mmwmac/desim.hpp"
#include "mmwmac/error.hpp"
#include "mmwmac/experiment.hpp"
#include "mmwmac/montecarlo.hpp"

struct mmw_scenario {
  mmwmac::Scenario value;
};

struct mmw_experiment {
  mmwmac::ExperimentSpec value;
};

namespace {

thread_local std::string last_error;

mmw_status fail(mmw_status code, const char* what) {
  last_error = what;
  return code;
}

mmw_status map_code(mmwmac::ErrorCode code) {
  switch (code) {
    case mmwmac::ErrorCode::kDomain:
      return MMW_ERR_DOMAIN;
    case mmwmac::ErrorCode::kNoInterferenceRange:
      return MMW_ERR_NO_INTERFERENCE_RANGE;
    case mmwmac::ErrorCode::kDegenerateDelay:
      return MMW_ERR_DEGENERATE_DELAY;
    case mmwmac::ErrorCode::kConfig:
      return MMW_ERR_CONFIG;
    case mmwmac::ErrorCode::kNumerical:
      return MMW_ERR_NUMERICAL;
    case mmwmac::ErrorCode::kIo:
      return MMW_ERR_IO;
  }
  return MMW_ERR_INTERNAL;
}

// Runs fn and converts any exception into a status code.
template <class Fn>
mmw_status guarded(Fn&& fn) {
  try {
    fn();
    return MMW_OK;
  } catch (const mmwmac::Error& e) {
    return fail(map_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MMW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MMW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MMW_ERR_INTERNAL, "unknown error");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define MMW_REQUIRE(cond, what) \
  if (!(cond)) return fail(MMW_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* mmw_version(void) { return mmwmac::kToolkitVersion; }

const char* mmw_last_error(void) { return last_error.c_str(); }

void mmw_string_free(char* s) { std::free(s); }

mmw_status mmw_scenario_create(mmw_scenario** out) {
  MMW_REQUIRE(out, "null output pointer");
  return guarded([&] { *out = new mmw_scenario{}; });
}

mmw_status mmw_scenario_from_json(const char* json, mmw_scenario** out) {
  MMW_REQUIRE(json && out, "null argument");
  return guarded([&] {
    // A scenario document is the "scenario" object of an experiment config.
    const std::string doc = std::string("{\"scenario\":") + json + "}";
    const mmwmac::ExperimentSpec spec = mmwmac::parse_spec(doc);
    *out = new mmw_scenario{spec.scenario};
  });
}

void mmw_scenario_destroy(mmw_scenario* s) { delete s; }

mmw_status mmw_scenario_set(mmw_scenario* s, mmw_scenario_field field, double value) {
  MMW_REQUIRE(s, "null scenario");
  mmwmac::Scenario& v = s->value;
  switch (field) {
    case MMW_TX_DENSITY: v.tx_density = value; break;
    case MMW_OBSTACLE_DENSITY: v.obstacle_density = value; break;
    case MMW_TX_PROB: v.tx_prob = value; break;
    case MMW_COHERENCE_ANGLE_DEG: v.coherence_angle = mmwmac::deg_to_rad(value); break;
    case MMW_BEAMWIDTH_DEG: v.antenna.beamwidth = mmwmac::deg_to_rad(value); break;
    case MMW_SIDE_LOBE: v.antenna.side_lobe = value; break;
    case MMW_REGION_AREA: v.region_area = value; break;
    case MMW_DMAX_FIXED_M: v.dmax_mode = mmwmac::DmaxMode::fixed(value); break;
    case MMW_DMAX_REFERENCE_LENGTH_M: v.dmax_mode = mmwmac::DmaxMode::derived(value); break;
    case MMW_TX_POWER_MW: v.channel.tx_power = value * 1e-3; break;
    case MMW_REF_ATTENUATION: v.channel.ref_attenuation = value; break;
    case MMW_PATHLOSS_EXPONENT: v.channel.pathloss_exponent = value; break;
    case MMW_SINR_THRESHOLD: v.channel.sinr_threshold = value; break;
    case MMW_NOISE_POWER_W: v.channel.noise_power = value; break;
    case MMW_ABSORPTION_DB_PER_KM: v.channel.absorption_db_per_km = value; break;
    default: return fail(MMW_ERR_INVALID_ARGUMENT, "unknown scenario field");
  }
  return MMW_OK;
}

mmw_status mmw_scenario_get(const mmw_scenario* s, mmw_scenario_field field, double* out) {
  MMW_REQUIRE(s && out, "null argument");
  const mmwmac::Scenario& v = s->value;
  switch (field) {
    case MMW_TX_DENSITY: *out = v.tx_density; break;
    case MMW_OBSTACLE_DENSITY: *out = v.obstacle_density; break;
    case MMW_TX_PROB: *out = v.tx_prob; break;
    case MMW_COHERENCE_ANGLE_DEG: *out = mmwmac::rad_to_deg(v.coherence_angle); break;
    case MMW_BEAMWIDTH_DEG: *out = mmwmac::rad_to_deg(v.antenna.beamwidth); break;
    case MMW_SIDE_LOBE: *out = v.antenna.side_lobe; break;
    case MMW_REGION_AREA: *out = v.region_area; break;
    case MMW_DMAX_FIXED_M: *out = v.dmax_mode.fixed_m; break;
    case MMW_DMAX_REFERENCE_LENGTH_M: *out = v.dmax_mode.reference_length_m; break;
    case MMW_TX_POWER_MW: *out = v.channel.tx_power * 1e3; break;
    case MMW_REF_ATTENUATION: *out = v.channel.ref_attenuation; break;
    case MMW_PATHLOSS_EXPONENT: *out = v.channel.pathloss_exponent; break;
    case MMW_SINR_THRESHOLD: *out = v.channel.sinr_threshold; break;
    case MMW_NOISE_POWER_W: *out = v.channel.noise_power; break;
    case MMW_ABSORPTION_DB_PER_KM: *out = v.channel.absorption_db_per_km; break;
    default: return fail(MMW_ERR_INVALID_ARGUMENT, "unknown scenario field");
  }
  return MMW_OK;
}

mmw_status mmw_interference_range(const mmw_scenario* s, double link_length_m, double* out_m) {
  MMW_REQUIRE(s && out_m, "null argument");
  return guarded([&] {
    *out_m = mmwmac::interference_range(link_length_m, s->value.channel, s->value.antenna);
  });
}

mmw_status mmw_sector_los_prob(const mmw_scenario* s, double* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] {
    const mmwmac::DerivedParams d = mmwmac::derive(s->value);
    *out = mmwmac::los_prob_regular_sector(d.interferer_density, s->value.obstacle_density,
                                           d.sector_area_at(d.dmax));
  });
}

mmw_status mmw_collision_given_length(const mmw_scenario* s, double ell_m, double* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] { *out = mmwmac::collision_prob_given_length(ell_m, s->value); });
}

mmw_status mmw_collision_prob(const mmw_scenario* s, mmw_collision* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] {
    const mmwmac::CollisionResult c = mmwmac::collision_prob(s->value);
    *out = {c.averaged, c.lower_bound, c.upper_bound, c.dmax};
  });
}

mmw_status mmw_aloha_throughput(const mmw_scenario* s, mmw_throughput* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] {
    const mmwmac::ThroughputReport r = mmwmac::aloha_throughput(s->value);
    *out = {r.per_link, r.lower_bound, r.upper_bound, r.ase};
  });
}

mmw_status mmw_tdma_throughput(const mmw_scenario* s, mmw_throughput* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] {
    const mmwmac::ThroughputReport r = mmwmac::tdma_throughput(s->value);
    *out = {r.per_link, r.lower_bound, r.upper_bound, r.ase};
  });
}

mmw_status mmw_delay_pmf(const mmw_scenario* s, uint64_t retransmissions, double* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] { *out = mmwmac::aloha_delay_pmf(s->value).pmf_at(retransmissions); });
}

mmw_status mmw_optimize_tx_prob(const mmw_scenario* s, double* out_tx_prob,
                                double* out_throughput) {
  MMW_REQUIRE(s && out_tx_prob && out_throughput, "null argument");
  return guarded([&] {
    const mmwmac::TxProbOptimum opt = mmwmac::optimize_tx_prob(s->value);
    *out_tx_prob = opt.tx_prob;
    *out_throughput = opt.throughput;
  });
}

mmw_status mmw_mc_sector_los_prob(const mmw_scenario* s, uint64_t trials, uint64_t seed,
                                  unsigned workers, mmw_estimate* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] {
    const mmwmac::Estimate e = mmwmac::estimate_sector_los_prob(s->value, trials, seed, workers);
    *out = {e.mean, e.std_error, e.trials, e.seed};
  });
}

mmw_status mmw_mc_collision_prob(const mmw_scenario* s, double given_length_m, uint64_t trials,
                                 uint64_t seed, unsigned workers, mmw_estimate* out) {
  MMW_REQUIRE(s && out, "null argument");
  return guarded([&] {
    std::optional<double> ell;
    if (given_length_m >= 0.0) ell = given_length_m;
    const mmwmac::Estimate e =
        mmwmac::estimate_collision_prob(s->value, ell, trials, seed, workers);
    *out = {e.mean, e.std_error, e.trials, e.seed};
  });
}

mmw_status mmw_csma_ca_cycle_us(int include_ack, double* out_us) {
  MMW_REQUIRE(out_us, "null argument");
  return guarded([&] {
    mmwmac::MacConfig mac;
    mac.include_ack = include_ack != 0;
    *out_us = mmwmac::csma_ca_cycle_us(mac);
  });
}

mmw_status mmw_csma_ca_utilization(int include_ack, double data_airtime_us, double* out) {
  MMW_REQUIRE(out, "null argument");
  return guarded([&] {
    mmwmac::MacConfig mac;
    mac.include_ack = include_ack != 0;
    *out = mmwmac::csma_ca_utilization(mac, data_airtime_us);
  });
}

mmw_status mmw_experiment_from_json(const char* json, mmw_experiment** out) {
  MMW_REQUIRE(json && out, "null argument");
  return guarded([&] { *out = new mmw_experiment{mmwmac::parse_spec(json)}; });
}

void mmw_experiment_destroy(mmw_experiment* e) { delete e; }

mmw_status mmw_experiment_set_engine(mmw_experiment* e, const char* engine) {
  MMW_REQUIRE(e && engine, "null argument");
  return guarded([&] { e->value.engine = mmwmac::engine_from_string(engine); });
}

mmw_status mmw_experiment_set_seed(mmw_experiment* e, uint64_t seed) {
  MMW_REQUIRE(e, "null experiment");
  e->value.seed = seed;
  return MMW_OK;
}

mmw_status mmw_experiment_set_trials(mmw_experiment* e, uint64_t trials) {
  MMW_REQUIRE(e, "null experiment");
  if (trials == 0) return fail(MMW_ERR_CONFIG, "trials must be at least 1");
  e->value.trials = trials;
  return MMW_OK;
}

mmw_status mmw_experiment_set_duration(mmw_experiment* e, double seconds) {
  MMW_REQUIRE(e, "null experiment");
  if (!(seconds > 0.0)) return fail(MMW_ERR_CONFIG, "duration must be positive");
  e->value.duration_s = seconds;
  return MMW_OK;
}

mmw_status mmw_experiment_set_workers(mmw_experiment* e, unsigned workers) {
  MMW_REQUIRE(e, "null experiment");
  if (workers == 0) return fail(MMW_ERR_CONFIG, "workers must be at least 1");
  e->value.workers = workers;
  return MMW_OK;
}

mmw_status mmw_experiment_has_sweep(const mmw_experiment* e, int* out) {
  MMW_REQUIRE(e && out, "null argument");
  *out = e->value.sweep.has_value() ? 1 : 0;
  return MMW_OK;
}

mmw_status mmw_experiment_output_path(const mmw_experiment* e, char** out) {
  MMW_REQUIRE(e && out, "null argument");
  return guarded([&] { *out = copy_string(e->value.output); });
}

mmw_status mmw_experiment_to_json(const mmw_experiment* e, char** out) {
  MMW_REQUIRE(e && out, "null argument");
  return guarded([&] { *out = copy_string(mmwmac::serialize_spec(e->value)); });
}

mmw_status mmw_experiment_run_csv(const mmw_experiment* e, char** out_csv) {
  MMW_REQUIRE(e && out_csv, "null argument");
  return guarded([&] {
    const std::vector<mmwmac::ExperimentSpec> specs{e->value};
    const std::vector<mmwmac::ExperimentResult> results{mmwmac::run_experiment(e->value)};
    *out_csv = copy_string(mmwmac::to_csv(specs, results));
  });
}

mmw_status mmw_figure_ids(char** out) {
  MMW_REQUIRE(out, "null argument");
  return guarded([&] {
    std::string ids;
    for (const auto& id : mmwmac::figure_ids()) ids += (ids.empty() ? "" : " ") + id;
    *out = copy_string(ids);
  });
}

mmw_status mmw_figure_run_csv(const char* id, uint64_t seed, uint64_t trials, double duration_s,
                              unsigned workers, char** out_csv) {
  MMW_REQUIRE(id && out_csv, "null argument");
  return guarded([&] {
    std::vector<mmwmac::ExperimentSpec> specs = mmwmac::figure_preset(id);
    std::vector<mmwmac::ExperimentResult> results;
    for (auto& sp : specs) {
      sp.seed = seed;
      if (trials > 0) sp.trials = trials;
      if (duration_s > 0.0) sp.duration_s = duration_s;
      if (workers > 0) sp.workers = workers;
      results.push_back(mmwmac::run_experiment(sp));
    }
    *out_csv = copy_string(mmwmac::to_csv(specs, results));
  });
}

}  // extern "C"
