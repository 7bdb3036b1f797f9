// Command-line front end. Talks to the toolkit only through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mmwmac/mmwmac.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code(mmw_status st) {
  switch (st) {
    case MMW_OK:
      return kExitOk;
    case MMW_ERR_CONFIG:
    case MMW_ERR_DOMAIN:
    case MMW_ERR_INVALID_ARGUMENT:
      return kExitConfig;
    case MMW_ERR_NUMERICAL:
    case MMW_ERR_NO_INTERFERENCE_RANGE:
    case MMW_ERR_DEGENERATE_DELAY:
      return kExitNumerical;
    default:
      return kExitOther;
  }
}

struct Options {
  std::string config;
  std::string out;
  std::string figure;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  double duration = 0.0;
  unsigned workers = 0;
};

struct ExperimentDeleter {
  void operator()(mmw_experiment* e) const { mmw_experiment_destroy(e); }
};
using ExperimentPtr = std::unique_ptr<mmw_experiment, ExperimentDeleter>;

class Failure {
 public:
  Failure(int code, std::string message) : code_(code), message_(std::move(message)) {}
  int code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  int code_;
  std::string message_;
};

void check(mmw_status st, const char* context) {
  if (st != MMW_OK) throw Failure(exit_code(st), std::string(context) + ": " + mmw_last_error());
}

std::string take(char* s) {
  std::string out(s ? s : "");
  mmw_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure(kExitConfig, "cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& csv) {
  if (path.empty() || path == "-") {
    std::cout << csv;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << csv)) throw Failure(kExitOther, "cannot write '" + path + "'");
}

// Loads the config (or an empty document), forces the engine when given and
// applies command-line overrides.
ExperimentPtr load(const Options& opt, const char* engine, bool need_config) {
  if (need_config && opt.config.empty()) throw Failure(kExitConfig, "--config is required");
  const std::string text = opt.config.empty() ? "{}" : read_file(opt.config);
  mmw_experiment* raw = nullptr;
  check(mmw_experiment_from_json(text.c_str(), &raw), "config");
  ExperimentPtr exp(raw);
  if (engine) check(mmw_experiment_set_engine(exp.get(), engine), "engine");
  if (opt.seed) check(mmw_experiment_set_seed(exp.get(), opt.seed), "--seed");
  if (opt.trials) check(mmw_experiment_set_trials(exp.get(), opt.trials), "--trials");
  if (opt.duration > 0.0) check(mmw_experiment_set_duration(exp.get(), opt.duration), "--duration");
  if (opt.workers) check(mmw_experiment_set_workers(exp.get(), opt.workers), "--workers");
  return exp;
}

void run_single(const Options& opt, const char* engine, bool need_sweep) {
  ExperimentPtr exp = load(opt, engine, need_sweep);
  if (need_sweep) {
    int has = 0;
    check(mmw_experiment_has_sweep(exp.get(), &has), "config");
    if (!has) throw Failure(kExitConfig, "config: sweep requires a 'sweep' section");
  }
  char* csv = nullptr;
  check(mmw_experiment_run_csv(exp.get(), &csv), "run");
  const std::string text = take(csv);
  std::string path = opt.out;
  if (path.empty()) {
    char* p = nullptr;
    check(mmw_experiment_output_path(exp.get(), &p), "config");
    path = take(p);
  }
  write_output(path, text);
}

void run_figure(const Options& opt) {
  if (opt.figure.empty()) throw Failure(kExitConfig, "--figure is required");
  char* csv = nullptr;
  check(mmw_figure_run_csv(opt.figure.c_str(), opt.seed ? opt.seed : 1, opt.trials, opt.duration,
                           opt.workers, &csv),
        "figure");
  write_output(opt.out, take(csv));
}

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "JSON experiment config");
  cmd->add_option("--seed", opt.seed, "Random seed (overrides the config)");
  cmd->add_option("--trials", opt.trials, "Monte Carlo trials per point");
  cmd->add_option("--duration", opt.duration, "Simulated seconds per replication");
  cmd->add_option("--out", opt.out, "Output CSV path ('-' for stdout)");
  cmd->add_option("--workers", opt.workers, "Worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave MAC analysis toolkit"};
  app.set_version_flag("--version", std::string("mmwmac ") + mmw_version());
  app.require_subcommand(1);
  Options opt;

  auto* analyze = app.add_subcommand("analyze", "Closed-form model");
  auto* mc = app.add_subcommand("mc", "Monte Carlo oracle");
  auto* sim = app.add_subcommand("sim", "Discrete-event simulation");
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep with the engine named in the config");
  auto* figure = app.add_subcommand("figure", "Run a figure preset");
  for (auto* cmd : {analyze, mc, sim, sweep, figure}) add_common(cmd, opt);
  figure->add_option("--figure", opt.figure, "Preset id (fig2a ... fig8b)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*analyze) run_single(opt, "analytic", false);
    if (*mc) run_single(opt, "montecarlo", false);
    if (*sim) run_single(opt, "desim", false);
    if (*sweep) run_single(opt, nullptr, true);
    if (*figure) run_figure(opt);
  } catch (const Failure& f) {
    std::cerr << "mmwmac: " << f.message() << "\n";
    return f.code();
  }
  return kExitOk;
}
