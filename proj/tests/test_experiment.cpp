#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mmwmac/error.hpp"
#include "mmwmac/experiment.hpp"
#include "mmwmac/rng.hpp"

using namespace mmwmac;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Numbers compared with a relative tolerance, everything else exactly.
bool json_close(const nlohmann::json& a, const nlohmann::json& b) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
  }
  if (a.type() != b.type() || a.size() != b.size()) return false;
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key()) || !json_close(it.value(), b.at(it.key()))) return false;
    }
    return true;
  }
  if (a.is_array()) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!json_close(a[i], b[i])) return false;
    }
    return true;
  }
  return a == b;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults from an empty document") {
  const ExperimentSpec s = parse_spec("{}");
  CHECK(s.engine == EngineKind::kAnalytic);
  CHECK(s.scenario.tx_density == doctest::Approx(1.0 / 9.0));
  CHECK(s.scenario.antenna.beamwidth == doctest::Approx(deg_to_rad(20)));
  CHECK(s.mac.slot_us == 50.0);
  CHECK_FALSE(s.sweep.has_value());
}

TEST_CASE("field values and units") {
  const ExperimentSpec s = parse_spec(R"({
    "engine": "desim", "seed": 9, "replications": 3,
    "scenario": {"tx_density": 0.5, "coherence_angle_deg": 10,
                 "antenna": {"beamwidth_deg": 40},
                 "channel": {"tx_power_mw": 10},
                 "dmax": {"mode": "derived", "reference_length_m": 4}},
    "mac": {"protocol": "csma_ca", "include_ack": true},
    "region": {"width_m": 20, "height_m": 5},
    "blockage": "coherence_sectors"})");
  CHECK(s.engine == EngineKind::kDesim);
  CHECK(s.seed == 9);
  CHECK(s.scenario.coherence_angle == doctest::Approx(deg_to_rad(10)));
  CHECK(s.scenario.channel.tx_power == doctest::Approx(0.01));
  CHECK(s.scenario.dmax_mode.kind == DmaxMode::Kind::kDerivedFromLength);
  CHECK(s.scenario.dmax_mode.reference_length_m == 4.0);
  CHECK(s.mac.protocol == MacKind::kCsmaCa);
  CHECK(s.mac.include_ack);
  CHECK(s.region.area() == 100.0);
  CHECK(s.blockage == BlockageModel::kCoherenceSectors);
}

TEST_CASE("diagnostics") {
  CHECK(contains(error_of("{\n  \"seed\": 1,\n  oops\n}"), "line 3"));
  CHECK(contains(error_of(R"({"scenario": {"tx_densty": 1}})"), "scenario.tx_densty: unknown field"));
  CHECK(contains(error_of(R"({"mac": {"cw_min": -1}})"), "mac.cw_min"));
  CHECK(contains(error_of(R"({"scenario": {"antenna": {"beamwidth_deg": "wide"}}})"),
                 "scenario.antenna.beamwidth_deg"));
  CHECK(contains(error_of(R"({"engine": "quantum"})"), "engine"));
  CHECK(contains(error_of(R"({"mac": {"protocol": "token_ring"}})"), "mac.protocol"));
  CHECK(contains(error_of(R"({"sweep": {"param": "color", "values": [1]}})"), "sweep.param"));
  CHECK(contains(error_of(R"({"sweep": {"param": "tx_prob", "values": [0.5, 2]}})"), "tx_prob"));
  CHECK(contains(error_of(R"({"scenario": {"tx_prob": 3}})"), "scenario"));
  CHECK(contains(error_of(R"({"trials": 0})"), "trials"));
  CHECK(contains(error_of("[1, 2]"), "object"));
}

TEST_CASE("serialize and parse round trip") {
  CounterRng rng(1234, 0);
  for (int i = 0; i < 200; ++i) {
    ExperimentSpec s;
    s.engine = static_cast<EngineKind>(static_cast<int>(rng.uniform(0, 3)));
    s.label = "run" + std::to_string(i);
    s.scenario.tx_density = rng.uniform(0.01, 5);
    s.scenario.obstacle_density = rng.uniform(0, 2);
    s.scenario.tx_prob = rng.uniform(0, 1);
    s.scenario.antenna.beamwidth = deg_to_rad(rng.uniform(10, 90));
    s.scenario.coherence_angle = deg_to_rad(rng.uniform(1, 10));
    s.scenario.antenna.side_lobe = rng.uniform(0, 0.5);
    s.scenario.channel.noise_power = rng.uniform(1e-12, 1e-10);
    if (rng.uniform() < 0.5) s.scenario.dmax_mode = DmaxMode::derived(rng.uniform(1, 6));
    else s.scenario.dmax_mode = DmaxMode::fixed(rng.uniform(5, 30));
    s.mac.protocol = static_cast<MacKind>(static_cast<int>(rng.uniform(0, 4)));
    s.mac.cw_min = 8;
    s.mac.saturated = rng.uniform() < 0.5;
    s.region = {rng.uniform(5, 50), rng.uniform(5, 50)};
    s.seed = static_cast<std::uint64_t>(rng.uniform(0, 1e15));
    s.trials = 1 + static_cast<std::uint64_t>(rng.uniform(0, 1e7));
    if (rng.uniform() < 0.5) s.sweep = Sweep{"obstacle_density", {rng.uniform(0, 1), rng.uniform(0, 1)}};
    if (rng.uniform() < 0.3) s.given_length_m = rng.uniform(0, 5);
    const std::string once = serialize_spec(s);
    const std::string twice = serialize_spec(parse_spec(once));
    REQUIRE(json_close(nlohmann::json::parse(once), nlohmann::json::parse(twice)));
  }
}

TEST_CASE("with_param") {
  ExperimentSpec s;
  CHECK(with_param(s, "beamwidth_deg", 40).scenario.antenna.beamwidth == doctest::Approx(deg_to_rad(40)));
  CHECK(with_param(s, "dmax_m", 12).scenario.dmax_mode.fixed_m == 12);
  CHECK(with_param(s, "region_area", 400).region.area() == doctest::Approx(400));
  CHECK(*with_param(s, "given_length_m", 3).given_length_m == 3);
  CHECK_THROWS_AS(with_param(s, "nonsense", 1), ConfigError);
}

TEST_CASE("analytic rows and CSV layout") {
  ExperimentSpec s = parse_spec(R"({"label": "x", "seed": 5,
      "sweep": {"param": "tx_density", "values": [0.1, 1.0]}})");
  const ExperimentResult r = run_experiment(s);
  std::set<std::string> metrics;
  for (const ResultRow& row : r.rows) metrics.insert(row.metric);
  for (const char* m : {"dmax_m", "collision_avg", "collision_lower", "collision_upper", "aloha_per_link",
                        "tdma_per_link", "aloha_ase", "tdma_ase", "sector_los_prob"}) {
    CHECK(metrics.count(m) == 1);
  }
  CHECK(r.rows.front().sweep_value == 0.1);
  CHECK(r.rows.back().sweep_value == 1.0);

  const std::string csv = to_csv({s}, {r});
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == std::string("# mmwmac ") + kToolkitVersion);
  std::getline(in, line);
  CHECK(contains(line, "engine=analytic"));
  CHECK(contains(line, "seed=5"));
  CHECK(contains(csv, "\nsweep_param,sweep_value,metric,value,stderr,engine,seed\n"));
  CHECK(contains(csv, "tx_density,0.1,x/dmax_m,15,0,analytic,5\n"));
}

TEST_CASE("partial numerical failures become notes") {
  ExperimentSpec s;
  s.scenario.dmax_mode = DmaxMode::derived(5.0);
  s.sweep = Sweep{"tx_power_mw", {2.5, 1e-6}};
  const ExperimentResult r = run_experiment(s);
  REQUIRE(r.notes.size() == 1);
  CHECK(contains(r.notes[0], "skipped"));
  CHECK(contains(to_csv({s}, {r}), "# note 0: " + r.notes[0]));
  s.sweep = Sweep{"tx_power_mw", {1e-6}};
  CHECK_THROWS_AS(run_experiment(s), NoInterferenceRange);
}

TEST_CASE("output does not depend on the worker count") {
  for (const char* engine : {"montecarlo", "desim"}) {
    ExperimentSpec s = parse_spec(std::string(R"({"engine": ")") + engine + R"(", "trials": 20000,
        "duration_s": 0.02, "replications": 2, "seed": 77, "scenario": {"obstacle_density": 0.11},
        "sweep": {"param": "tx_density", "values": [0.2, 0.8, 2.0]}})");
    s.workers = 1;
    const std::string one = to_csv({s}, {run_experiment(s)});
    s.workers = 3;
    const std::string three = to_csv({s}, {run_experiment(s)});
    CHECK(one == three);
    s.sweep.reset();
    s.workers = 1;
    const std::string single = to_csv({s}, {run_experiment(s)});
    s.workers = 4;
    const std::string single4 = to_csv({s}, {run_experiment(s)});
    CHECK(single == single4);
  }
}

TEST_CASE("figure presets") {
  for (const std::string& id : figure_ids()) {
    const auto specs = figure_preset(id);
    REQUIRE_FALSE(specs.empty());
    for (const ExperimentSpec& s : specs) {
      s.validate();
      REQUIRE(s.sweep.has_value());
    }
  }
  const auto fig6 = figure_preset("fig6");
  REQUIRE(fig6.size() == 6);
  std::set<double> densities;
  for (const ExperimentSpec& s : fig6) {
    densities.insert(s.scenario.tx_density);
    CHECK(s.sweep->param == "tx_prob");
    CHECK(s.sweep->values.size() == 10);
    CHECK(s.scenario.obstacle_density == 0.11);
    if (s.engine == EngineKind::kDesim) CHECK(s.replications >= 20);
  }
  CHECK(densities == std::set<double>{0.44, 1.0, 4.0});
  const auto fig2a = figure_preset("fig2a");
  std::set<EngineKind> engines;
  for (const ExperimentSpec& s : fig2a) engines.insert(s.engine);
  CHECK(engines == std::set<EngineKind>{EngineKind::kAnalytic, EngineKind::kMonteCarlo});
  try {
    figure_preset("fig9");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(contains(e.what(), "fig2a"));
  }
}

}  // TEST_SUITE
