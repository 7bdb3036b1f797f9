/* C interface to the mmwmac toolkit.
 *
 * Every function returns an mmw_status. On failure the message of the most
 * recent error on the calling thread is available from mmw_last_error().
 * Strings returned through char** out-parameters are owned by the caller and
 * must be released with mmw_string_free(). Angles are in degrees and powers
 * in milliwatts at this boundary; everything else is SI.
 */
#ifndef MMWMAC_H
#define MMWMAC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MMW_API __declspec(dllexport)
#else
#define MMW_API __attribute__((visibility("default")))
#endif

typedef enum mmw_status {
  MMW_OK = 0,
  MMW_ERR_DOMAIN = 1,
  MMW_ERR_NO_INTERFERENCE_RANGE = 2,
  MMW_ERR_DEGENERATE_DELAY = 3,
  MMW_ERR_CONFIG = 4,
  MMW_ERR_NUMERICAL = 5,
  MMW_ERR_IO = 6,
  MMW_ERR_INVALID_ARGUMENT = 7,
  MMW_ERR_INTERNAL = 8
} mmw_status;

typedef struct mmw_scenario mmw_scenario;
typedef struct mmw_experiment mmw_experiment;

typedef enum mmw_scenario_field {
  MMW_TX_DENSITY = 0,        /* links per m^2 */
  MMW_OBSTACLE_DENSITY,      /* obstacles per m^2 */
  MMW_TX_PROB,               /* [0, 1] */
  MMW_COHERENCE_ANGLE_DEG,
  MMW_BEAMWIDTH_DEG,
  MMW_SIDE_LOBE,
  MMW_REGION_AREA,           /* m^2 */
  MMW_DMAX_FIXED_M,          /* selects a fixed interference range */
  MMW_DMAX_REFERENCE_LENGTH_M, /* selects a range derived from this link length */
  MMW_TX_POWER_MW,
  MMW_REF_ATTENUATION,
  MMW_PATHLOSS_EXPONENT,
  MMW_SINR_THRESHOLD,
  MMW_NOISE_POWER_W,
  MMW_ABSORPTION_DB_PER_KM
} mmw_scenario_field;

typedef struct mmw_collision {
  double averaged;
  double lower_bound;
  double upper_bound;
  double dmax;
} mmw_collision;

typedef struct mmw_throughput {
  double per_link;
  double lower_bound;
  double upper_bound;
  double ase;
} mmw_throughput;

typedef struct mmw_estimate {
  double mean;
  double std_error;
  uint64_t trials;
  uint64_t seed;
} mmw_estimate;

MMW_API const char* mmw_version(void);
/* Thread-local; valid until the next failing call on the same thread. */
MMW_API const char* mmw_last_error(void);
MMW_API void mmw_string_free(char* s);

/* Scenario handles. */
MMW_API mmw_status mmw_scenario_create(mmw_scenario** out);
MMW_API mmw_status mmw_scenario_from_json(const char* json, mmw_scenario** out);
MMW_API void mmw_scenario_destroy(mmw_scenario* s);
MMW_API mmw_status mmw_scenario_set(mmw_scenario* s, mmw_scenario_field field, double value);
MMW_API mmw_status mmw_scenario_get(const mmw_scenario* s, mmw_scenario_field field,
                                    double* out);

/* Closed-form model. */
MMW_API mmw_status mmw_interference_range(const mmw_scenario* s, double link_length_m,
                                          double* out_m);
MMW_API mmw_status mmw_sector_los_prob(const mmw_scenario* s, double* out);
MMW_API mmw_status mmw_collision_given_length(const mmw_scenario* s, double ell_m, double* out);
MMW_API mmw_status mmw_collision_prob(const mmw_scenario* s, mmw_collision* out);
MMW_API mmw_status mmw_aloha_throughput(const mmw_scenario* s, mmw_throughput* out);
MMW_API mmw_status mmw_tdma_throughput(const mmw_scenario* s, mmw_throughput* out);
MMW_API mmw_status mmw_delay_pmf(const mmw_scenario* s, uint64_t retransmissions, double* out);
MMW_API mmw_status mmw_optimize_tx_prob(const mmw_scenario* s, double* out_tx_prob,
                                        double* out_throughput);

/* Monte Carlo oracle. given_length_m < 0 draws the link length per trial. */
MMW_API mmw_status mmw_mc_sector_los_prob(const mmw_scenario* s, uint64_t trials, uint64_t seed,
                                          unsigned workers, mmw_estimate* out);
MMW_API mmw_status mmw_mc_collision_prob(const mmw_scenario* s, double given_length_m,
                                         uint64_t trials, uint64_t seed, unsigned workers,
                                         mmw_estimate* out);

/* CSMA/CA reservation overhead with default timing, and its utilization at
 * the given data airtime. */
MMW_API mmw_status mmw_csma_ca_cycle_us(int include_ack, double* out_us);
MMW_API mmw_status mmw_csma_ca_utilization(int include_ack, double data_airtime_us,
                                           double* out);

/* Experiments. */
MMW_API mmw_status mmw_experiment_from_json(const char* json, mmw_experiment** out);
MMW_API void mmw_experiment_destroy(mmw_experiment* e);
/* engine: "analytic", "montecarlo" or "desim". */
MMW_API mmw_status mmw_experiment_set_engine(mmw_experiment* e, const char* engine);
MMW_API mmw_status mmw_experiment_set_seed(mmw_experiment* e, uint64_t seed);
MMW_API mmw_status mmw_experiment_set_trials(mmw_experiment* e, uint64_t trials);
MMW_API mmw_status mmw_experiment_set_duration(mmw_experiment* e, double seconds);
MMW_API mmw_status mmw_experiment_set_workers(mmw_experiment* e, unsigned workers);
MMW_API mmw_status mmw_experiment_has_sweep(const mmw_experiment* e, int* out);
/* Output path from the config; empty when unset. Caller frees. */
MMW_API mmw_status mmw_experiment_output_path(const mmw_experiment* e, char** out);
MMW_API mmw_status mmw_experiment_to_json(const mmw_experiment* e, char** out);
MMW_API mmw_status mmw_experiment_run_csv(const mmw_experiment* e, char** out_csv);

/* Figure presets. Zero overrides keep the preset defaults. */
MMW_API mmw_status mmw_figure_ids(char** out_space_separated);
MMW_API mmw_status mmw_figure_run_csv(const char* id, uint64_t seed, uint64_t trials,
                                      double duration_s, unsigned workers, char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* MMWMAC_H */
