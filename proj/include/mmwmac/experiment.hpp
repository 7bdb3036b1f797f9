#pragma once

// Experiment runner: JSON configuration, parameter sweeps over any of the
// three engines, CSV emission and the figure presets.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmwmac/desim.hpp"
#include "mmwmac/model.hpp"

namespace mmwmac {

inline constexpr const char* kToolkitVersion = "0.1.0";

enum class EngineKind { kAnalytic, kMonteCarlo, kDesim };

const char* to_string(EngineKind e);
EngineKind engine_from_string(const std::string& name);

struct Sweep {
  // tx_density, obstacle_density, tx_prob, coherence_angle_deg,
  // beamwidth_deg, side_lobe, region_area, dmax_m, tx_power_mw or
  // given_length_m.
  std::string param;
  std::vector<double> values;
};

struct ExperimentSpec {
  EngineKind engine = EngineKind::kAnalytic;
  std::string label;
  Scenario scenario;
  MacConfig mac;
  Region region;
  BlockageModel blockage = BlockageModel::kSegments;
  std::optional<Sweep> sweep;
  std::optional<double> given_length_m;
  bool optimize = false;  // analytic: also report the optimal tx probability
  std::uint64_t trials = 100000;
  double duration_s = 1.0;
  std::uint32_t replications = 1;
  std::uint64_t seed = 1;
  std::uint32_t workers = 1;
  std::string output;

  /// Throws ConfigError (or DomainError for out-of-range scenario values).
  void validate() const;
};

struct ResultRow {
  std::string sweep_param;
  double sweep_value = 0.0;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
  EngineKind engine = EngineKind::kAnalytic;
  std::uint64_t seed = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> notes;  // emitted as '#' comment lines
};

/// Parses a JSON document. Errors carry the line/column or the field path.
ExperimentSpec parse_spec(const std::string& text);
/// Pretty-printed JSON that parse_spec reads back to the same spec.
std::string serialize_spec(const ExperimentSpec& spec, int indent = 2);

/// Applies one sweep value to a copy of the spec.
ExperimentSpec with_param(const ExperimentSpec& spec, const std::string& param, double value);

/// Rows ordered by sweep index, then metric. Deterministic in the spec,
/// independent of the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// CSV with metadata comments, the fixed header and 9-significant-digit
/// values. Metrics of labelled specs are written as "label/metric".
std::string to_csv(const std::vector<ExperimentSpec>& specs,
                   const std::vector<ExperimentResult>& results);

/// Known ids: fig2a fig2b fig3 fig5a fig5b fig6 fig7a fig7b fig8a fig8b.
std::vector<ExperimentSpec> figure_preset(const std::string& id);
const std::vector<std::string>& figure_ids();

}  // namespace mmwmac
