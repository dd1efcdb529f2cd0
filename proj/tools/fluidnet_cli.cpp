// Command-line driver. Talks to the solver only through the C interface.
#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fluidnet/fluidnet.h"

namespace {

struct CliError {
  std::string message;
  int code;
};

void check(fluidnet_status s, const std::string& context) {
  if (s != FLUIDNET_OK) {
    throw CliError{context + ": " + fluidnet_status_string(s) + ": " + fluidnet_last_error(),
                   static_cast<int>(s)};
  }
}

template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr); }
};

using ConfigHandle = Handle<fluidnet_config, fluidnet_config_destroy>;
using RunHandle = Handle<fluidnet_run, fluidnet_run_destroy>;
using ExperimentHandle = Handle<fluidnet_experiment, fluidnet_experiment_destroy>;
using TableHandle = Handle<fluidnet_table, fluidnet_table_destroy>;

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto one = [&](const std::string& s) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (s.empty() || pos != s.size()) throw CliError{"bad seed '" + s + "'", 2};
    return v;
  };
  if (auto dots = text.find(".."); dots != std::string::npos) {
    auto lo = one(text.substr(0, dots)), hi = one(text.substr(dots + 2));
    if (lo > hi) throw CliError{"seed range must be ascending", 2};
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) seeds.push_back(one(item));
  if (seeds.empty()) throw CliError{"empty seed list", 2};
  return seeds;
}

// "VAR=v1,v2,..."
void parse_sweep(const std::string& text, std::string& var, std::vector<double>& values) {
  auto eq = text.find('=');
  if (eq == std::string::npos) throw CliError{"--sweep expects VAR=v1,v2,...", 2};
  var = text.substr(0, eq);
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end != item.c_str() + item.size() || !std::isfinite(v)) {
      throw CliError{"bad sweep value '" + item + "'", 2};
    }
    values.push_back(v);
  }
  if (values.empty()) throw CliError{"empty sweep value list", 2};
}

fluidnet_baseline parse_baseline(const std::string& s) {
  if (s == "fa") return FLUIDNET_BASELINE_FA;
  if (s == "fpa") return FLUIDNET_BASELINE_FPA;
  throw CliError{"unknown baseline '" + s + "' (expected fa or fpa)", 2};
}

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
};

void load_config(const CommonOptions& opt, ConfigHandle& cfg) {
  if (opt.config_path.empty()) {
    check(fluidnet_config_create(&cfg.ptr), "config");
  } else {
    check(fluidnet_config_load(opt.config_path.c_str(), &cfg.ptr), "config " + opt.config_path);
  }
  check(fluidnet_config_apply_env(cfg.ptr), "environment overrides");
  for (const auto& kv : opt.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw CliError{"--set expects KEY=VALUE, got '" + kv + "'", 2};
    check(fluidnet_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()),
          "--set " + kv);
  }
  check(fluidnet_config_validate(cfg.ptr), "config");
}

void add_common(CLI::App* app, CommonOptions& opt) {
  app->add_option("--config", opt.config_path, "Scenario config file (key = value)");
  app->add_option("--set", opt.sets, "Override one config field, KEY=VALUE (repeatable)");
}

struct RunOptions {
  CommonOptions common;
  std::uint64_t seed = 0;
  std::string baseline = "fa";
  std::string out;
  std::string trace;
  std::string radmm_trace;
  std::string state;
  std::string scenario;
};

int cmd_run(const RunOptions& o) {
  ConfigHandle cfg;
  load_config(o.common, cfg);
  RunHandle run;
  check(fluidnet_run_create(cfg.ptr, o.seed, parse_baseline(o.baseline),
                            o.radmm_trace.empty() ? 0 : 1, &run.ptr),
        "run seed " + std::to_string(o.seed));
  if (!o.out.empty()) check(fluidnet_run_write_breakdown(run.ptr, o.out.c_str()), o.out);
  if (!o.trace.empty()) check(fluidnet_run_write_trace(run.ptr, o.trace.c_str()), o.trace);
  if (!o.radmm_trace.empty()) {
    check(fluidnet_run_write_radmm_trace(run.ptr, o.radmm_trace.c_str()), o.radmm_trace);
  }
  if (!o.state.empty()) check(fluidnet_run_write_state(run.ptr, o.state.c_str()), o.state);
  if (!o.scenario.empty()) {
    check(fluidnet_run_write_scenario(run.ptr, o.scenario.c_str()), o.scenario);
  }

  std::vector<int> q(fluidnet_run_num_users(run.ptr));
  fluidnet_run_digits(run.ptr, q.data(), q.size());
  std::printf("seed %llu  loss %.9g  latency %.9g s  psnr %.6g dB  iterations %d%s\n",
              static_cast<unsigned long long>(o.seed), fluidnet_run_loss(run.ptr),
              fluidnet_run_latency(run.ptr), fluidnet_run_psnr(run.ptr),
              fluidnet_run_iterations(run.ptr),
              fluidnet_run_converged(run.ptr) ? "" : "  (not converged)");
  std::printf("digits");
  for (int d : q) std::printf(" %d", d);
  std::printf("\n");
  return 0;
}

struct SweepOptions {
  CommonOptions common;
  std::string seeds = "0..49";
  std::string sweep;
  std::vector<std::string> baselines{"fa"};
  std::string out = "results.csv";
  std::string trace;
  int threads = 0;
};

int cmd_sweep(const SweepOptions& o) {
  ConfigHandle cfg;
  load_config(o.common, cfg);
  ExperimentHandle exp;
  check(fluidnet_experiment_create(cfg.ptr, &exp.ptr), "experiment");

  std::string var = "none";
  std::vector<double> values;
  if (!o.sweep.empty()) parse_sweep(o.sweep, var, values);
  check(fluidnet_experiment_set_sweep(exp.ptr, var.c_str(), values.data(), values.size()),
        "--sweep");
  auto seeds = parse_seeds(o.seeds);
  check(fluidnet_experiment_set_seeds(exp.ptr, seeds.data(), seeds.size()), "--seeds");
  std::vector<fluidnet_baseline> modes;
  for (const auto& b : o.baselines) modes.push_back(parse_baseline(b));
  check(fluidnet_experiment_set_modes(exp.ptr, modes.data(), modes.size()), "--baseline");
  check(fluidnet_experiment_set_threads(exp.ptr, o.threads), "--threads");
  check(fluidnet_experiment_keep_traces(exp.ptr, o.trace.empty() ? 0 : 1), "--trace");

  TableHandle table;
  check(fluidnet_experiment_run(exp.ptr, &table.ptr), "experiment");
  check(fluidnet_table_write_csv(table.ptr, o.out.c_str()), o.out);
  if (!o.trace.empty()) check(fluidnet_table_write_traces(table.ptr, o.trace.c_str()), o.trace);

  if (values.empty()) values.push_back(0.0);
  for (auto m : modes) {
    for (double v : values) {
      std::printf("%-3s %s=%-10g mean loss %.9g  latency %.9g s  psnr %.6g dB\n",
                  m == FLUIDNET_BASELINE_FA ? "fa" : "fpa", var.c_str(), v,
                  fluidnet_table_mean_loss(table.ptr, m, v),
                  fluidnet_table_mean_latency(table.ptr, m, v),
                  fluidnet_table_mean_psnr(table.ptr, m, v));
    }
  }
  const auto failures = fluidnet_table_num_failures(table.ptr);
  std::printf("%zu runs, %zu failed; results in %s\n", fluidnet_table_num_rows(table.ptr),
              failures, o.out.c_str());
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint compute, quantization, beamforming and fluid-antenna optimizer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fluidnet_version()));

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Solve one seeded scenario");
  add_common(run, run_opt.common);
  run->add_option("--seed", run_opt.seed, "Scenario seed");
  run->add_option("--baseline", run_opt.baseline, "fa or fpa")->check(CLI::IsMember({"fa", "fpa"}));
  run->add_option("--out", run_opt.out, "Per-iteration loss breakdown CSV");
  run->add_option("--trace", run_opt.trace, "Per-iteration BCD trace CSV");
  run->add_option("--radmm-trace", run_opt.radmm_trace, "Per-iteration beamforming trace CSV");
  run->add_option("--state", run_opt.state, "Final state JSON");
  run->add_option("--scenario", run_opt.scenario, "Sampled angles, gains and geometry JSON");

  SweepOptions sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one variable");
  add_common(sweep, sweep_opt.common);
  sweep->add_option("--seeds", sweep_opt.seeds, "Seed range N..M or list a,b,c");
  sweep->add_option("--sweep", sweep_opt.sweep, "VAR=v1,v2,... with VAR in alpha, M, SNR, d_model");
  sweep->add_option("--baseline", sweep_opt.baselines, "fa and/or fpa")
      ->check(CLI::IsMember({"fa", "fpa"}));
  sweep->add_option("--out", sweep_opt.out, "Result table CSV");
  sweep->add_option("--trace", sweep_opt.trace, "Per-iteration traces of every run (CSV)");
  sweep->add_option("--threads", sweep_opt.threads, "Worker threads (0: all cores)");

  SweepOptions base_opt;
  base_opt.baselines = {"fa", "fpa"};
  auto* baseline = app.add_subcommand("baseline", "FA versus fixed diagonal array");
  add_common(baseline, base_opt.common);
  baseline->add_option("--seeds", base_opt.seeds, "Seed range N..M or list a,b,c");
  baseline->add_option("--sweep", base_opt.sweep, "VAR=v1,v2,...");
  baseline->add_option("--out", base_opt.out, "Result table CSV");
  baseline->add_option("--trace", base_opt.trace, "Per-iteration traces of every run (CSV)");
  baseline->add_option("--threads", base_opt.threads, "Worker threads (0: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opt);
    if (*sweep) return cmd_sweep(sweep_opt);
    if (*baseline) return cmd_sweep(base_opt);
  } catch (const CliError& e) {
    std::cerr << "fluidnet: " << e.message << "\n";
    return e.code == 0 ? 1 : e.code;
  }
  return 1;
}
