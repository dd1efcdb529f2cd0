#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fluidnet/bcd.hpp"
#include "fluidnet/config.hpp"
#include "fluidnet/geometry_channel.hpp"

namespace fluidnet {

enum class BaselineMode {
  FluidAntenna,   // all four blocks
  FixedDiagonal,  // antennas pinned on the panel diagonal, no position block
};

enum class SweepVariable { None, Alpha, M, Snr, DModel };

BaselineMode parse_baseline_mode(const std::string& text);  // "fa" | "fpa"
std::string to_string(BaselineMode mode);
SweepVariable parse_sweep_variable(const std::string& text);
std::string to_string(SweepVariable var);

/// Copy of `config` with the sweep variable set to `value`.
/// SNR is in dB and rescales P_user; d_model sets every user's model size.
SystemConfig apply_sweep(const SystemConfig& config, SweepVariable var, double value);

struct ExperimentSpec {
  SystemConfig config = default_config();
  SweepVariable sweep = SweepVariable::None;
  std::vector<double> values;  // ignored when sweep == None
  std::vector<std::uint64_t> seeds{0};
  std::vector<BaselineMode> modes{BaselineMode::FluidAntenna};
  BcdOptions options;
  int threads = 0;             // 0: hardware concurrency
  bool keep_traces = false;

  /// Throws Error(Configuration) on empty sweeps, duplicate seeds, etc.
  void validate() const;
};

struct RunRecord {
  BaselineMode mode = BaselineMode::FluidAntenna;
  double sweep_value = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double loss = 0.0;
  double latency = 0.0;
  double psnr = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<int> q;
  BcdTrace trace;  // populated when keep_traces
};

struct AggregateRecord {
  BaselineMode mode = BaselineMode::FluidAntenna;
  double sweep_value = 0.0;
  int runs = 0;
  double mean_loss = 0.0, median_loss = 0.0;
  double mean_latency = 0.0, median_latency = 0.0;
  double mean_psnr = 0.0, median_psnr = 0.0;
  double mean_iterations = 0.0, median_iterations = 0.0;
};

struct ResultTable {
  SweepVariable sweep = SweepVariable::None;
  std::vector<RunRecord> rows;
  std::vector<AggregateRecord> aggregates;

  int failures() const;
  const AggregateRecord* find(BaselineMode mode, double sweep_value) const;
};

struct SingleRun {
  Scenario scenario;
  BcdResult result;
};

/// Samples the scenario for `seed`, builds the initial state and runs BCD.
SingleRun run_single(const SystemConfig& config, std::uint64_t seed,
                     BaselineMode mode, const BcdOptions& options = {});

/// One row per (mode, sweep value, seed) in that order, plus one aggregate
/// per (mode, sweep value) over successful runs.
ResultTable run_experiment(const ExperimentSpec& spec);

std::vector<AggregateRecord> aggregate(const std::vector<RunRecord>& rows);

double mean(std::vector<double> v);
double median(std::vector<double> v);

/// Raw rows followed by aggregate rows (seed column "mean" or "median").
void write_results_csv(std::ostream& out, const ResultTable& table);

/// Per-iteration traces of every kept run, keyed by mode, sweep value, seed.
void write_traces_csv(std::ostream& out, const ResultTable& table);

/// "0..9" (inclusive), "3" or "1,4,7".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<double> parse_value_list(const std::string& text);

}  // namespace fluidnet
