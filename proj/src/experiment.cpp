#include "mmwmac/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mmwmac/analytics.hpp"
#include "mmwmac/error.hpp"
#include "mmwmac/montecarlo.hpp"
#include "mmwmac/parallel.hpp"
#include "mmwmac/rng.hpp"

namespace mmwmac {

using json = nlohmann::json;

namespace {

const char* const kSweepParams[] = {
    "tx_density",  "obstacle_density", "tx_prob", "coherence_angle_deg", "beamwidth_deg",
    "side_lobe",   "region_area",      "dmax_m",  "tx_power_mw",         "given_length_m",
};

bool known_sweep_param(const std::string& p) {
  return std::any_of(std::begin(kSweepParams), std::end(kSweepParams),
                     [&](const char* k) { return p == k; });
}

// ---- JSON reading with field-path diagnostics -------------------------------

class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "expected an object");
  }

  template <class T>
  bool read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return false;
    const std::string field = child(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) throw ConfigError(field + ": expected true or false");
      out = it->get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!it->is_string()) throw ConfigError(field + ": expected a string");
      out = it->get<std::string>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer() || (it->is_number_integer() && !it->is_number_unsigned() &&
                                       it->get<std::int64_t>() < 0)) {
        throw ConfigError(field + ": expected a non-negative integer");
      }
      const auto v = it->get<std::uint64_t>();
      if (v > std::numeric_limits<T>::max()) throw ConfigError(field + ": value too large");
      out = static_cast<T>(v);
    } else {
      if (!it->is_number()) throw ConfigError(field + ": expected a number");
      out = it->get<double>();
      if (!std::isfinite(out)) throw ConfigError(field + ": must be finite");
    }
    return true;
  }

  const json* object(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(child(it.key().c_str()) + ": unknown field");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config: " : path_ + ": "; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_antenna(const json& j, AntennaPattern& a) {
  Fields f(j, "scenario.antenna");
  double deg = rad_to_deg(a.beamwidth);
  if (f.read("beamwidth_deg", deg)) a.beamwidth = deg_to_rad(deg);
  f.read("side_lobe", a.side_lobe);
  f.finish();
}

void read_channel(const json& j, Channel& c) {
  Fields f(j, "scenario.channel");
  double mw = c.tx_power * 1e3;
  if (f.read("tx_power_mw", mw)) c.tx_power = mw * 1e-3;
  f.read("ref_attenuation", c.ref_attenuation);
  f.read("pathloss_exponent", c.pathloss_exponent);
  f.read("sinr_threshold", c.sinr_threshold);
  f.read("noise_power_w", c.noise_power);
  f.read("absorption_db_per_km", c.absorption_db_per_km);
  f.finish();
}

void read_dmax(const json& j, DmaxMode& d) {
  Fields f(j, "scenario.dmax");
  std::string mode = d.kind == DmaxMode::Kind::kFixed ? "fixed" : "derived";
  f.read("mode", mode);
  if (mode == "fixed") {
    d.kind = DmaxMode::Kind::kFixed;
  } else if (mode == "derived") {
    d.kind = DmaxMode::Kind::kDerivedFromLength;
  } else {
    throw ConfigError("scenario.dmax.mode: expected 'fixed' or 'derived', got '" + mode + "'");
  }
  f.read("value_m", d.fixed_m);
  f.read("reference_length_m", d.reference_length_m);
  f.finish();
}

void read_scenario(const json& j, Scenario& s) {
  Fields f(j, "scenario");
  f.read("tx_density", s.tx_density);
  f.read("obstacle_density", s.obstacle_density);
  f.read("tx_prob", s.tx_prob);
  double deg = rad_to_deg(s.coherence_angle);
  if (f.read("coherence_angle_deg", deg)) s.coherence_angle = deg_to_rad(deg);
  f.read("region_area", s.region_area);
  if (const json* a = f.object("antenna")) read_antenna(*a, s.antenna);
  if (const json* c = f.object("channel")) read_channel(*c, s.channel);
  if (const json* d = f.object("dmax")) read_dmax(*d, s.dmax_mode);
  f.finish();
}

void read_mac(const json& j, MacConfig& m) {
  Fields f(j, "mac");
  std::string protocol = to_string(m.protocol);
  if (f.read("protocol", protocol)) {
    try {
      m.protocol = mac_kind_from_string(protocol);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("mac.protocol: ") + e.what());
    }
  }
  f.read("cw_min", m.cw_min);
  f.read("cw_max", m.cw_max);
  f.read("slot_us", m.slot_us);
  f.read("backoff_slot_us", m.backoff_slot_us);
  f.read("packet_bytes", m.packet_bytes);
  f.read("data_rate_bps", m.data_rate_bps);
  f.read("control_rate_bps", m.control_rate_bps);
  f.read("sifs_us", m.sifs_us);
  f.read("difs_us", m.difs_us);
  f.read("control_frame_bytes", m.control_frame_bytes);
  f.read("cbr_bps", m.cbr_bps);
  f.read("saturated", m.saturated);
  f.read("include_ack", m.include_ack);
  f.finish();
}

void read_region(const json& j, Region& r) {
  Fields f(j, "region");
  f.read("width_m", r.width);
  f.read("height_m", r.height);
  f.finish();
}

void read_sweep(const json& j, Sweep& sw) {
  Fields f(j, "sweep");
  if (!f.read("param", sw.param)) throw ConfigError("sweep: missing 'param'");
  const json* values = f.object("values");
  if (!values || !values->is_array() || values->empty()) {
    throw ConfigError("sweep.values: expected a non-empty array of numbers");
  }
  sw.values.clear();
  for (std::size_t i = 0; i < values->size(); ++i) {
    const json& v = (*values)[i];
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ConfigError("sweep.values[" + std::to_string(i) + "]: expected a finite number");
    }
    sw.values.push_back(v.get<double>());
  }
  f.finish();
}

// ---- evaluation ---------------------------------------------------------------

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double std_error() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) /
                                         static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
  }
};

struct PointContext {
  const ExperimentSpec& spec;
  std::string param;
  double value;
  unsigned workers;
  std::vector<ResultRow>& rows;

  void emit(const std::string& metric, double v, double se = 0.0) const {
    rows.push_back({param, value, metric, v, se, spec.engine, spec.seed});
  }
};

void eval_analytic(const PointContext& ctx) {
  const Scenario& s = ctx.spec.scenario;
  const DerivedParams d = derive(s);
  const double area_dmax = d.sector_area_at(d.dmax);
  ctx.emit("dmax_m", d.dmax);
  ctx.emit("interferer_density", d.interferer_density);
  ctx.emit("sector_count", d.sector_count);
  ctx.emit("sector_los_prob",
           los_prob_regular_sector(d.interferer_density, s.obstacle_density, area_dmax));
  const CollisionResult c = collision_prob(s);
  if (ctx.spec.given_length_m) {
    const double ell = *ctx.spec.given_length_m;
    ctx.emit("collision_given_length", collision_prob_given_length(ell, s));
    ctx.emit("success_given_length", success_prob_given_length(ell, s));
  } else {
    ctx.emit("collision_avg", c.averaged);
  }
  ctx.emit("collision_lower", c.lower_bound);
  ctx.emit("collision_upper", c.upper_bound);
  const ThroughputReport aloha = aloha_throughput(s);
  ctx.emit("aloha_per_link", aloha.per_link);
  ctx.emit("aloha_lower", aloha.lower_bound);
  ctx.emit("aloha_upper", aloha.upper_bound);
  ctx.emit("aloha_ase", aloha.ase);
  const ThroughputReport tdma = tdma_throughput(s);
  ctx.emit("tdma_per_link", tdma.per_link);
  ctx.emit("tdma_upper", tdma.upper_bound);
  ctx.emit("tdma_ase", tdma.ase);
  if (ctx.spec.optimize) {
    const TxProbOptimum opt = optimize_tx_prob(s);
    ctx.emit("opt_tx_prob", opt.tx_prob);
    ctx.emit("opt_throughput", opt.throughput);
    if (tdma.per_link > 0.0) ctx.emit("opt_gain_over_tdma", opt.throughput / tdma.per_link - 1.0);
  }
}

void eval_montecarlo(const PointContext& ctx) {
  const ExperimentSpec& sp = ctx.spec;
  const Estimate los = estimate_sector_los_prob(sp.scenario, sp.trials, sp.seed, ctx.workers);
  ctx.emit("sector_los_prob", los.mean, los.std_error);
  const Estimate coll =
      estimate_collision_prob(sp.scenario, sp.given_length_m, sp.trials, sp.seed, ctx.workers);
  ctx.emit(sp.given_length_m ? "collision_given_length" : "collision_avg", coll.mean,
           coll.std_error);
}

std::uint64_t topology_seed(std::uint64_t seed, std::uint32_t rep) {
  return mix64(seed ^ mix64(0x746F706Full + rep));
}

std::uint64_t run_seed(std::uint64_t seed, std::uint32_t rep) {
  return mix64(seed ^ mix64(0x72756E00ull + rep));
}

void eval_desim(const PointContext& ctx) {
  const ExperimentSpec& sp = ctx.spec;
  MacConfig mac = sp.mac;
  mac.tx_prob = sp.scenario.tx_prob;
  std::vector<SimStats> reps(sp.replications);
  parallel_for(sp.replications, ctx.workers, [&](std::size_t r) {
    const auto rep = static_cast<std::uint32_t>(r);
    const PlanarTopology topo =
        build_topology(sp.scenario, sp.region, topology_seed(sp.seed, rep), sp.blockage);
    reps[r] = run(topo, mac, sp.duration_s, run_seed(sp.seed, rep));
  });

  std::map<std::string, Accumulator> acc;
  const char* const order[] = {"links",          "per_link_throughput", "network_throughput",
                               "ase",            "mean_delay_slots",    "collision_rate",
                               "blocked_rate",   "mean_retransmissions"};
  for (const SimStats& st : reps) {
    const double links = static_cast<double>(st.per_link.size());
    acc["links"].add(links);
    acc["network_throughput"].add(st.network_throughput);
    acc["ase"].add(st.ase);
    if (st.per_link.empty()) continue;
    acc["per_link_throughput"].add(st.per_link_throughput);
    std::uint64_t attempts = 0, collided = 0, blocked = 0;
    for (const LinkStats& l : st.per_link) {
      attempts += l.attempts;
      collided += l.collided;
      blocked += l.blocked;
    }
    if (attempts > 0) {
      acc["collision_rate"].add(static_cast<double>(collided) / static_cast<double>(attempts));
      acc["blocked_rate"].add(static_cast<double>(blocked) / static_cast<double>(attempts));
    }
    if (!st.delay_samples.empty()) {
      double sum = 0.0;
      for (double x : st.delay_samples) sum += x;
      acc["mean_delay_slots"].add(sum / static_cast<double>(st.delay_samples.size()));
      double retx = 0.0;
      for (auto x : st.retransmissions) retx += x;
      acc["mean_retransmissions"].add(retx / static_cast<double>(st.retransmissions.size()));
    }
  }
  for (const char* m : order) {
    auto it = acc.find(m);
    if (it != acc.end() && it->second.n > 0) ctx.emit(m, it->second.mean(), it->second.std_error());
  }
}

bool is_numerical(const Error& e) {
  return e.code() == ErrorCode::kNumerical || e.code() == ErrorCode::kNoInterferenceRange ||
         e.code() == ErrorCode::kDegenerateDelay;
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v(n);
  const double la = std::log10(a);
  const double lb = std::log10(b);
  for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, n == 1 ? la : la + (lb - la) * i / (n - 1));
  return v;
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

const char* to_string(EngineKind e) {
  switch (e) {
    case EngineKind::kAnalytic:
      return "analytic";
    case EngineKind::kMonteCarlo:
      return "montecarlo";
    case EngineKind::kDesim:
      return "desim";
  }
  return "unknown";
}

EngineKind engine_from_string(const std::string& name) {
  if (name == "analytic") return EngineKind::kAnalytic;
  if (name == "montecarlo") return EngineKind::kMonteCarlo;
  if (name == "desim") return EngineKind::kDesim;
  throw ConfigError("engine: expected analytic, montecarlo or desim, got '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (trials == 0) throw ConfigError("trials: must be at least 1");
  if (!(duration_s > 0.0)) throw ConfigError("duration_s: must be positive");
  if (replications == 0) throw ConfigError("replications: must be at least 1");
  if (!(region.width > 0.0 && region.height > 0.0)) {
    throw ConfigError("region: width and height must be positive");
  }
  mac.validate();
  try {
    scenario.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  if (given_length_m && !(*given_length_m >= 0.0)) {
    throw ConfigError("given_length_m: must be non-negative");
  }
  if (sweep) {
    if (!known_sweep_param(sweep->param)) {
      throw ConfigError("sweep.param: '" + sweep->param + "' is not a sweepable field");
    }
    if (sweep->values.empty()) throw ConfigError("sweep.values: must not be empty");
    for (double v : sweep->values) {
      try {
        with_param(*this, sweep->param, v).scenario.validate();
      } catch (const DomainError& e) {
        throw ConfigError("sweep value " + fmt9(v) + " for " + sweep->param + ": " + e.what());
      }
    }
  }
}

ExperimentSpec parse_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "[json.exception.parse_error.N] parse error at line L, column C: ...".
    std::string what = e.what();
    const auto tag = what.find("] ");
    if (tag != std::string::npos) what.erase(0, tag + 2);
    throw ConfigError("config " + what);
  }
  ExperimentSpec spec;
  Fields f(j, "");
  std::string engine = to_string(spec.engine);
  if (f.read("engine", engine)) spec.engine = engine_from_string(engine);
  f.read("label", spec.label);
  if (const json* s = f.object("scenario")) read_scenario(*s, spec.scenario);
  if (const json* m = f.object("mac")) read_mac(*m, spec.mac);
  if (const json* r = f.object("region")) read_region(*r, spec.region);
  std::string blockage = spec.blockage == BlockageModel::kSegments ? "segments" : "coherence_sectors";
  if (f.read("blockage", blockage)) {
    if (blockage == "segments") {
      spec.blockage = BlockageModel::kSegments;
    } else if (blockage == "coherence_sectors") {
      spec.blockage = BlockageModel::kCoherenceSectors;
    } else {
      throw ConfigError("blockage: expected 'segments' or 'coherence_sectors'");
    }
  }
  if (const json* sw = f.object("sweep")) {
    if (!sw->is_null()) {
      Sweep s;
      read_sweep(*sw, s);
      spec.sweep = s;
    }
  }
  double ell = 0.0;
  if (const json* g = f.object("given_length_m"); g && !g->is_null()) {
    f.read("given_length_m", ell);
    spec.given_length_m = ell;
  }
  f.read("optimize", spec.optimize);
  f.read("trials", spec.trials);
  f.read("duration_s", spec.duration_s);
  f.read("replications", spec.replications);
  f.read("seed", spec.seed);
  f.read("workers", spec.workers);
  f.read("output", spec.output);
  f.finish();
  spec.validate();
  return spec;
}

std::string serialize_spec(const ExperimentSpec& spec, int indent) {
  const Scenario& s = spec.scenario;
  json dmax;
  if (s.dmax_mode.kind == DmaxMode::Kind::kFixed) {
    dmax = {{"mode", "fixed"}, {"value_m", s.dmax_mode.fixed_m}};
  } else {
    dmax = {{"mode", "derived"}, {"reference_length_m", s.dmax_mode.reference_length_m}};
  }
  json j = {
      {"engine", to_string(spec.engine)},
      {"label", spec.label},
      {"scenario",
       {{"tx_density", s.tx_density},
        {"obstacle_density", s.obstacle_density},
        {"tx_prob", s.tx_prob},
        {"coherence_angle_deg", rad_to_deg(s.coherence_angle)},
        {"region_area", s.region_area},
        {"antenna", {{"beamwidth_deg", rad_to_deg(s.antenna.beamwidth)},
                     {"side_lobe", s.antenna.side_lobe}}},
        {"channel", {{"tx_power_mw", s.channel.tx_power * 1e3},
                     {"ref_attenuation", s.channel.ref_attenuation},
                     {"pathloss_exponent", s.channel.pathloss_exponent},
                     {"sinr_threshold", s.channel.sinr_threshold},
                     {"noise_power_w", s.channel.noise_power},
                     {"absorption_db_per_km", s.channel.absorption_db_per_km}}},
        {"dmax", dmax}}},
      {"mac",
       {{"protocol", to_string(spec.mac.protocol)},
        {"cw_min", spec.mac.cw_min},
        {"cw_max", spec.mac.cw_max},
        {"slot_us", spec.mac.slot_us},
        {"backoff_slot_us", spec.mac.backoff_slot_us},
        {"packet_bytes", spec.mac.packet_bytes},
        {"data_rate_bps", spec.mac.data_rate_bps},
        {"control_rate_bps", spec.mac.control_rate_bps},
        {"sifs_us", spec.mac.sifs_us},
        {"difs_us", spec.mac.difs_us},
        {"control_frame_bytes", spec.mac.control_frame_bytes},
        {"cbr_bps", spec.mac.cbr_bps},
        {"saturated", spec.mac.saturated},
        {"include_ack", spec.mac.include_ack}}},
      {"region", {{"width_m", spec.region.width}, {"height_m", spec.region.height}}},
      {"blockage",
       spec.blockage == BlockageModel::kSegments ? "segments" : "coherence_sectors"},
      {"optimize", spec.optimize},
      {"trials", spec.trials},
      {"duration_s", spec.duration_s},
      {"replications", spec.replications},
      {"seed", spec.seed},
      {"workers", spec.workers},
      {"output", spec.output},
  };
  if (spec.sweep) j["sweep"] = {{"param", spec.sweep->param}, {"values", spec.sweep->values}};
  if (spec.given_length_m) j["given_length_m"] = *spec.given_length_m;
  return j.dump(indent);
}

ExperimentSpec with_param(const ExperimentSpec& spec, const std::string& param, double value) {
  ExperimentSpec out = spec;
  Scenario& s = out.scenario;
  if (param == "tx_density") {
    s.tx_density = value;
  } else if (param == "obstacle_density") {
    s.obstacle_density = value;
  } else if (param == "tx_prob") {
    s.tx_prob = value;
  } else if (param == "coherence_angle_deg") {
    s.coherence_angle = deg_to_rad(value);
  } else if (param == "beamwidth_deg") {
    s.antenna.beamwidth = deg_to_rad(value);
  } else if (param == "side_lobe") {
    s.antenna.side_lobe = value;
  } else if (param == "region_area") {
    s.region_area = value;
    // The simulated region follows, keeping its aspect ratio.
    if (value > 0.0 && std::isfinite(value) && out.region.area() > 0.0) {
      const double k = std::sqrt(value / out.region.area());
      out.region.width *= k;
      out.region.height *= k;
    }
  } else if (param == "dmax_m") {
    s.dmax_mode = DmaxMode::fixed(value);
  } else if (param == "tx_power_mw") {
    s.channel.tx_power = value * 1e-3;
  } else if (param == "given_length_m") {
    out.given_length_m = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + param + "'");
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t n = spec.sweep ? spec.sweep->values.size() : 1;
  std::vector<std::vector<ResultRow>> rows(n);
  std::vector<std::string> failures(n);
  std::vector<std::exception_ptr> first_error(n);
  const unsigned outer = n > 1 ? spec.workers : 1;
  const unsigned inner = n > 1 ? 1 : spec.workers;

  parallel_for(n, outer, [&](std::size_t i) {
    const std::string param = spec.sweep ? spec.sweep->param : "none";
    const double value = spec.sweep ? spec.sweep->values[i] : 0.0;
    const ExperimentSpec point = spec.sweep ? with_param(spec, param, value) : spec;
    const PointContext ctx{point, param, value, inner, rows[i]};
    try {
      switch (spec.engine) {
        case EngineKind::kAnalytic:
          eval_analytic(ctx);
          break;
        case EngineKind::kMonteCarlo:
          eval_montecarlo(ctx);
          break;
        case EngineKind::kDesim:
          eval_desim(ctx);
          break;
      }
    } catch (const Error& e) {
      if (!is_numerical(e)) throw;
      rows[i].clear();
      failures[i] = "point " + param + "=" + fmt9(value) + " skipped: " + e.what();
      first_error[i] = std::current_exception();
    }
  });

  ExperimentResult result;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (first_error[i]) {
      ++failed;
      result.notes.push_back(failures[i]);
    }
    result.rows.insert(result.rows.end(), rows[i].begin(), rows[i].end());
  }
  if (failed == n) std::rethrow_exception(first_error[0]);
  return result;
}

std::string to_csv(const std::vector<ExperimentSpec>& specs,
                   const std::vector<ExperimentResult>& results) {
  if (specs.size() != results.size()) throw DomainError("specs and results differ in length");
  std::ostringstream out;
  out << "# mmwmac " << kToolkitVersion << "\n";
  bool contention = false;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const ExperimentSpec& sp = specs[i];
    out << "# series " << i << ": label=" << (sp.label.empty() ? "-" : sp.label)
        << " engine=" << to_string(sp.engine) << " seed=" << sp.seed << "\n";
    // The worker count never changes results, so it stays out of the record
    // to keep files byte-identical across machines.
    json recorded = json::parse(serialize_spec(sp, -1));
    recorded.erase("workers");
    out << "# config " << i << ": " << recorded.dump() << "\n";
    for (const std::string& note : results[i].notes) out << "# note " << i << ": " << note << "\n";
    contention |= sp.engine == EngineKind::kDesim &&
                  (sp.mac.protocol == MacKind::kCsma || sp.mac.protocol == MacKind::kCsmaCa);
  }
  if (contention) {
    out << "# assumption: carrier sensing is idealized; a station defers while an ongoing "
           "transmission would collide at its receiver (CSMA/CA also protects the other "
           "receiver); backoff is uniform in [0, CW) backoff slots with CW doubling up to "
           "cw_max\n";
  }
  out << "sweep_param,sweep_value,metric,value,stderr,engine,seed\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const std::string prefix = specs[i].label.empty() ? "" : specs[i].label + "/";
    for (const ResultRow& r : results[i].rows) {
      out << r.sweep_param << ',' << fmt9(r.sweep_value) << ',' << prefix << r.metric << ','
          << fmt9(r.value) << ',' << fmt9(r.std_error) << ',' << to_string(r.engine) << ','
          << r.seed << '\n';
    }
  }
  return out.str();
}

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = {"fig2a", "fig2b", "fig3",  "fig5a", "fig5b",
                                               "fig6",  "fig7a", "fig7b", "fig8a", "fig8b"};
  return ids;
}

namespace {

ExperimentSpec base_spec(EngineKind engine, const std::string& label) {
  ExperimentSpec sp;
  sp.engine = engine;
  sp.label = label;
  sp.scenario.antenna.beamwidth = deg_to_rad(20.0);
  sp.scenario.coherence_angle = deg_to_rad(5.0);
  sp.scenario.dmax_mode = DmaxMode::fixed(15.0);
  sp.scenario.tx_prob = 1.0;
  sp.trials = 100000;
  return sp;
}

// Analytic and Monte Carlo series over the same sweep.
void add_pair(std::vector<ExperimentSpec>& out, ExperimentSpec sp, const std::string& label) {
  sp.engine = EngineKind::kAnalytic;
  sp.label = "analytic_" + label;
  out.push_back(sp);
  sp.engine = EngineKind::kMonteCarlo;
  sp.label = "mc_" + label;
  out.push_back(sp);
}

}  // namespace

std::vector<ExperimentSpec> figure_preset(const std::string& id) {
  std::vector<ExperimentSpec> out;
  if (id == "fig2a") {
    for (double lo : {0.0025, 0.25}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.obstacle_density = lo;
      sp.sweep = Sweep{"tx_density", logspace(0.01, 10.0, 25)};
      add_pair(out, sp, "lo" + tag(lo));
    }
  } else if (id == "fig2b") {
    for (double lt : {1.0 / 9.0, 0.25, 1.0}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.tx_density = lt;
      sp.sweep = Sweep{"obstacle_density", logspace(0.001, 10.0, 25)};
      add_pair(out, sp, "lt" + tag(lt));
    }
  } else if (id == "fig3") {
    for (double theta : {10.0, 20.0, 40.0}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.tx_density = 1.0 / 9.0;
      sp.scenario.obstacle_density = 0.11;
      sp.scenario.antenna.beamwidth = deg_to_rad(theta);
      sp.sweep = Sweep{"given_length_m", linspace(0.0, 15.0, 31)};
      add_pair(out, sp, "theta" + tag(theta));
    }
  } else if (id == "fig5a") {
    for (double lo : {1.0 / 400.0, 0.11, 1.0 / 9.0}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.obstacle_density = lo;
      sp.given_length_m = 5.0;
      sp.sweep = Sweep{"tx_density", logspace(0.001, 10.0, 25)};
      add_pair(out, sp, "lo" + tag(lo));
    }
  } else if (id == "fig5b") {
    for (double lt : {1.0 / 9.0, 0.25}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.tx_density = lt;
      sp.given_length_m = 5.0;
      sp.sweep = Sweep{"obstacle_density", logspace(0.001, 10.0, 25)};
      add_pair(out, sp, "lt" + tag(lt));
    }
  } else if (id == "fig6") {
    for (double lt : {0.44, 1.0, 4.0}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.tx_density = lt;
      sp.scenario.obstacle_density = 0.11;
      sp.scenario.region_area = 100.0;
      sp.sweep = Sweep{"tx_prob", linspace(0.1, 1.0, 10)};
      sp.label = "analytic_lt" + tag(lt);
      out.push_back(sp);
      sp.engine = EngineKind::kDesim;
      sp.label = "desim_lt" + tag(lt);
      sp.mac.protocol = MacKind::kSlottedAloha;
      sp.mac.saturated = true;
      sp.duration_s = 1.0;
      sp.replications = 20;
      out.push_back(sp);
    }
  } else if (id == "fig7a" || id == "fig7b") {
    // 7a: fixed 15 m interference range; 7b: range derived from a 5 m link.
    for (double theta : {10.0, 25.0, 40.0}) {
      ExperimentSpec sp = base_spec(EngineKind::kAnalytic, "");
      sp.scenario.antenna.beamwidth = deg_to_rad(theta);
      sp.scenario.obstacle_density = 0.11;
      sp.scenario.region_area = 500.0;
      if (id == "fig7b") sp.scenario.dmax_mode = DmaxMode::derived(5.0);
      sp.optimize = true;
      sp.sweep = Sweep{"tx_density", logspace(0.01, 10.0, 25)};
      sp.label = (id == "fig7a" ? "aloha15_theta" : "aloha_theta") + tag(theta);
      out.push_back(sp);
    }
  } else if (id == "fig8a" || id == "fig8b") {
    ExperimentSpec sp = base_spec(EngineKind::kDesim, "");
    sp.scenario.antenna.beamwidth = deg_to_rad(10.0);
    sp.scenario.obstacle_density = 0.25;
    sp.scenario.region_area = 100.0;
    sp.duration_s = 1.0;
    sp.replications = 5;
    struct Series {
      const char* name;
      MacKind mac;
      double rho;
    };
    std::vector<Series> series = {{"aloha1", MacKind::kSlottedAloha, 1.0},
                                  {"aloha0.1", MacKind::kSlottedAloha, 0.1},
                                  {"tdma", MacKind::kTdma, 1.0}};
    if (id == "fig8a") {
      sp.mac.saturated = true;
      sp.sweep = Sweep{"tx_density", {0.1, 0.25, 0.5, 1.0, 2.0, 4.0}};
      ExperimentSpec an = sp;
      an.engine = EngineKind::kAnalytic;
      for (double rho : {1.0, 0.1}) {
        an.scenario.tx_prob = rho;
        an.label = "analytic_rho" + tag(rho);
        out.push_back(an);
      }
    } else {
      sp.mac.saturated = false;
      sp.mac.cbr_bps = 384e6;  // 0.24 packets per slot
      sp.sweep = Sweep{"tx_density", {0.01, 0.02, 0.04, 0.06, 0.08, 0.1, 0.25, 0.5, 1.0, 2.0}};
      series = {{"aloha1", MacKind::kSlottedAloha, 1.0},
                {"aloha0.9", MacKind::kSlottedAloha, 0.9},
                {"tdma", MacKind::kTdma, 1.0},
                {"csma", MacKind::kCsma, 1.0},
                {"csma_ca", MacKind::kCsmaCa, 1.0}};
    }
    for (const Series& s : series) {
      ExperimentSpec d = sp;
      d.mac.protocol = s.mac;
      d.scenario.tx_prob = s.rho;
      d.label = std::string("desim_") + s.name;
      out.push_back(d);
    }
  } else {
    std::string known;
    for (const auto& k : figure_ids()) known += " " + k;
    throw ConfigError("unknown figure id '" + id + "' (known:" + known + ")");
  }
  return out;
}

}  // namespace mmwmac
