#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fluidnet/comm_metrics.hpp"
#include "fluidnet/geometry_channel.hpp"
#include "fluidnet/solver_beamforming.hpp"
#include "fluidnet/solver_fa.hpp"

namespace fluidnet {

struct BcdOptions {
  int max_iterations = 50;
  bool update_frequencies = true;
  bool update_digits = true;
  bool update_beamforming = true;
  bool update_positions = true;  // false reproduces the fixed-antenna baseline
  RadmmParams radmm;
  FaSearchParams fa;
};

struct BcdIteration {
  int iteration = 0;
  double loss = 0.0;
  double loss_after_freq = 0.0;
  double loss_after_quant = 0.0;
  double loss_after_beam = 0.0;
  double loss_after_fa = 0.0;
  double rel_change = 0.0;
  double wall_time_s = 0.0;
  int radmm_iterations = 0;
};

struct BcdRadmmRow {
  int bcd_iteration = 0;
  RadmmTraceRow row;
};

struct BcdTrace {
  double initial_loss = 0.0;
  std::vector<BcdIteration> iterations;
  bool converged = false;  // false when max_iterations was hit
  std::vector<BcdRadmmRow> radmm;  // when options.radmm.record_trace
  std::vector<LossBreakdown> breakdowns;  // [0] initial, then one per iteration
};

struct BcdResult {
  NetworkState state;
  LossBreakdown breakdown;
  BcdTrace trace;
  std::vector<std::vector<Point>> position_history;  // R after each FA block
};

/// Uniform f_s split, q = 16, channel-matched unit-norm W, given R.
NetworkState initial_state(const SystemConfig& config,
                           const ChannelRealization& channels,
                           std::vector<Point> R);

/// |loss - previous| / max(|previous|, 1e-12)
double relative_change(double loss, double previous);

/// Alternates the frequency, digit, beamforming and position blocks until the
/// relative loss change drops below config.epsilon. Every block update is
/// accepted only if the total loss does not increase.
BcdResult run_bcd(const NetworkState& initial, const ChannelModel& model,
                  const PowerAllocation& powers, const SystemConfig& config,
                  const BcdOptions& options = {});

void write_trace_csv(std::ostream& out, const BcdTrace& trace);
/// LossBreakdown rows for the initial state and every iteration.
void write_breakdown_csv(std::ostream& out, std::uint64_t seed, const BcdTrace& trace);
void write_radmm_trace_csv(std::ostream& out, const BcdTrace& trace);
void write_state_json(std::ostream& out, const BcdResult& result);

}  // namespace fluidnet
