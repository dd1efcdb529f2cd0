#include "fluidnet/fluidnet.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "fluidnet/harness.hpp"

struct fluidnet_config {
  fluidnet::SystemConfig cfg;
};

struct fluidnet_run {
  std::uint64_t seed = 0;
  fluidnet::SingleRun run;
};

struct fluidnet_experiment {
  fluidnet::ExperimentSpec spec;
};

struct fluidnet_table {
  fluidnet::ResultTable table;
};

namespace {

thread_local std::string g_last_error;

fluidnet_status to_status(fluidnet::ErrorCode code) {
  switch (code) {
    case fluidnet::ErrorCode::InvalidInput: return FLUIDNET_ERR_INVALID_INPUT;
    case fluidnet::ErrorCode::Configuration: return FLUIDNET_ERR_CONFIG;
    case fluidnet::ErrorCode::Numerical: return FLUIDNET_ERR_NUMERICAL;
    case fluidnet::ErrorCode::Io: return FLUIDNET_ERR_IO;
  }
  return FLUIDNET_ERR_INTERNAL;
}

template <typename F>
fluidnet_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return FLUIDNET_OK;
  } catch (const fluidnet::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FLUIDNET_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FLUIDNET_ERR_INTERNAL;
  }
}

fluidnet_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return FLUIDNET_ERR_INVALID_INPUT;
}

template <typename Writer>
void write_file(const char* path, Writer&& w) {
  std::ofstream out(path);
  if (!out) fluidnet::fail(fluidnet::ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
  w(out);
  if (!out) fluidnet::fail(fluidnet::ErrorCode::Io, std::string("write to '") + path + "' failed");
}

fluidnet::BaselineMode to_mode(fluidnet_baseline b) {
  return b == FLUIDNET_BASELINE_FPA ? fluidnet::BaselineMode::FixedDiagonal
                                    : fluidnet::BaselineMode::FluidAntenna;
}

}  // namespace

extern "C" {

const char* fluidnet_version(void) { return "0.1.0"; }

const char* fluidnet_status_string(fluidnet_status status) {
  switch (status) {
    case FLUIDNET_OK: return "ok";
    case FLUIDNET_ERR_INVALID_INPUT: return "invalid input";
    case FLUIDNET_ERR_CONFIG: return "configuration error";
    case FLUIDNET_ERR_NUMERICAL: return "numerical error";
    case FLUIDNET_ERR_IO: return "i/o error";
    case FLUIDNET_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* fluidnet_last_error(void) { return g_last_error.c_str(); }

fluidnet_status fluidnet_config_create(fluidnet_config** out) {
  if (!out) return null_arg("out");
  return guarded([&] { *out = new fluidnet_config{fluidnet::default_config()}; });
}

fluidnet_status fluidnet_config_load(const char* path, fluidnet_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new fluidnet_config{fluidnet::load_config(path)}; });
}

void fluidnet_config_destroy(fluidnet_config* config) { delete config; }

fluidnet_status fluidnet_config_apply_env(fluidnet_config* config) {
  if (!config) return null_arg("config");
  return guarded([&] { fluidnet::apply_env_overrides(config->cfg); });
}

fluidnet_status fluidnet_config_set(fluidnet_config* config, const char* key,
                                    const char* value) {
  if (!config) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guarded([&] { fluidnet::set_config_field(config->cfg, key, value); });
}

fluidnet_status fluidnet_config_get(const fluidnet_config* config, const char* key,
                                    double* value) {
  if (!config) return null_arg("config");
  if (!key || !value) return null_arg("key/value");
  return guarded([&] { *value = fluidnet::get_config_field(config->cfg, key); });
}

fluidnet_status fluidnet_config_validate(const fluidnet_config* config) {
  if (!config) return null_arg("config");
  return guarded([&] { config->cfg.validate(); });
}

fluidnet_status fluidnet_config_save(const fluidnet_config* config, const char* path) {
  if (!config) return null_arg("config");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) { fluidnet::write_config(o, config->cfg); });
  });
}

fluidnet_status fluidnet_run_create(const fluidnet_config* config, uint64_t seed,
                                    fluidnet_baseline baseline, int radmm_trace,
                                    fluidnet_run** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  return guarded([&] {
    fluidnet::BcdOptions opts;
    opts.radmm.record_trace = radmm_trace != 0;
    auto* run = new fluidnet_run;
    try {
      run->seed = seed;
      run->run = fluidnet::run_single(config->cfg, seed, to_mode(baseline), opts);
    } catch (...) {
      delete run;
      throw;
    }
    *out = run;
  });
}

void fluidnet_run_destroy(fluidnet_run* run) { delete run; }

double fluidnet_run_loss(const fluidnet_run* run) {
  return run ? run->run.result.breakdown.loss : std::nan("");
}

double fluidnet_run_latency(const fluidnet_run* run) {
  return run ? run->run.result.breakdown.total_latency() : std::nan("");
}

double fluidnet_run_psnr(const fluidnet_run* run) {
  return run ? run->run.result.breakdown.total_psnr() : std::nan("");
}

int fluidnet_run_iterations(const fluidnet_run* run) {
  return run ? static_cast<int>(run->run.result.trace.iterations.size()) : 0;
}

int fluidnet_run_converged(const fluidnet_run* run) {
  return run && run->run.result.trace.converged ? 1 : 0;
}

size_t fluidnet_run_num_users(const fluidnet_run* run) {
  return run ? run->run.result.state.q.size() : 0;
}

size_t fluidnet_run_digits(const fluidnet_run* run, int* out, size_t capacity) {
  if (!run) return 0;
  const auto& q = run->run.result.state.q;
  for (size_t i = 0; out && i < q.size() && i < capacity; ++i) out[i] = q[i];
  return q.size();
}

fluidnet_status fluidnet_run_write_trace(const fluidnet_run* run, const char* path) {
  if (!run) return null_arg("run");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) { fluidnet::write_trace_csv(o, run->run.result.trace); });
  });
}

fluidnet_status fluidnet_run_write_radmm_trace(const fluidnet_run* run, const char* path) {
  if (!run) return null_arg("run");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path,
               [&](std::ostream& o) { fluidnet::write_radmm_trace_csv(o, run->run.result.trace); });
  });
}

fluidnet_status fluidnet_run_write_breakdown(const fluidnet_run* run, const char* path) {
  if (!run) return null_arg("run");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) {
      fluidnet::write_breakdown_csv(o, run->seed, run->run.result.trace);
    });
  });
}

fluidnet_status fluidnet_run_write_state(const fluidnet_run* run, const char* path) {
  if (!run) return null_arg("run");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) { fluidnet::write_state_json(o, run->run.result); });
  });
}

fluidnet_status fluidnet_run_write_scenario(const fluidnet_run* run, const char* path) {
  if (!run) return null_arg("run");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) { fluidnet::write_scenario_json(o, run->run.scenario); });
  });
}

fluidnet_status fluidnet_experiment_create(const fluidnet_config* config,
                                           fluidnet_experiment** out) {
  if (!config) return null_arg("config");
  if (!out) return null_arg("out");
  return guarded([&] {
    auto* e = new fluidnet_experiment;
    e->spec.config = config->cfg;
    *out = e;
  });
}

void fluidnet_experiment_destroy(fluidnet_experiment* experiment) { delete experiment; }

fluidnet_status fluidnet_experiment_set_sweep(fluidnet_experiment* experiment,
                                              const char* var, const double* values,
                                              size_t count) {
  if (!experiment) return null_arg("experiment");
  if (!var) return null_arg("var");
  if (count > 0 && !values) return null_arg("values");
  return guarded([&] {
    experiment->spec.sweep = fluidnet::parse_sweep_variable(var);
    experiment->spec.values.assign(values, values + count);
  });
}

fluidnet_status fluidnet_experiment_set_seeds(fluidnet_experiment* experiment,
                                              const uint64_t* seeds, size_t count) {
  if (!experiment) return null_arg("experiment");
  if (count > 0 && !seeds) return null_arg("seeds");
  return guarded([&] { experiment->spec.seeds.assign(seeds, seeds + count); });
}

fluidnet_status fluidnet_experiment_set_modes(fluidnet_experiment* experiment,
                                              const fluidnet_baseline* modes, size_t count) {
  if (!experiment) return null_arg("experiment");
  if (count > 0 && !modes) return null_arg("modes");
  return guarded([&] {
    experiment->spec.modes.clear();
    for (size_t i = 0; i < count; ++i) experiment->spec.modes.push_back(to_mode(modes[i]));
  });
}

fluidnet_status fluidnet_experiment_set_threads(fluidnet_experiment* experiment, int threads) {
  if (!experiment) return null_arg("experiment");
  return guarded([&] { experiment->spec.threads = threads; });
}

fluidnet_status fluidnet_experiment_keep_traces(fluidnet_experiment* experiment, int keep) {
  if (!experiment) return null_arg("experiment");
  return guarded([&] { experiment->spec.keep_traces = keep != 0; });
}

fluidnet_status fluidnet_experiment_run(const fluidnet_experiment* experiment,
                                        fluidnet_table** out) {
  if (!experiment) return null_arg("experiment");
  if (!out) return null_arg("out");
  return guarded([&] { *out = new fluidnet_table{fluidnet::run_experiment(experiment->spec)}; });
}

void fluidnet_table_destroy(fluidnet_table* table) { delete table; }

size_t fluidnet_table_num_rows(const fluidnet_table* table) {
  return table ? table->table.rows.size() : 0;
}

size_t fluidnet_table_num_failures(const fluidnet_table* table) {
  return table ? static_cast<size_t>(table->table.failures()) : 0;
}

double fluidnet_table_mean_loss(const fluidnet_table* table, fluidnet_baseline mode,
                                double sweep_value) {
  const auto* a = table ? table->table.find(to_mode(mode), sweep_value) : nullptr;
  return a ? a->mean_loss : std::nan("");
}

double fluidnet_table_mean_latency(const fluidnet_table* table, fluidnet_baseline mode,
                                   double sweep_value) {
  const auto* a = table ? table->table.find(to_mode(mode), sweep_value) : nullptr;
  return a ? a->mean_latency : std::nan("");
}

double fluidnet_table_mean_psnr(const fluidnet_table* table, fluidnet_baseline mode,
                                double sweep_value) {
  const auto* a = table ? table->table.find(to_mode(mode), sweep_value) : nullptr;
  return a ? a->mean_psnr : std::nan("");
}

fluidnet_status fluidnet_table_write_csv(const fluidnet_table* table, const char* path) {
  if (!table) return null_arg("table");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) { fluidnet::write_results_csv(o, table->table); });
  });
}

fluidnet_status fluidnet_table_write_traces(const fluidnet_table* table, const char* path) {
  if (!table) return null_arg("table");
  if (!path) return null_arg("path");
  return guarded([&] {
    write_file(path, [&](std::ostream& o) { fluidnet::write_traces_csv(o, table->table); });
  });
}

}  // extern "C"
