#include "fluidnet/bcd.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fluidnet/solver_freq.hpp"
#include "fluidnet/solver_quant.hpp"

namespace fluidnet {
namespace {

template <typename F>
auto in_block(const char* block, int iteration, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(block) + " block, iteration " +
                              std::to_string(iteration) + ": " + e.what());
  }
}

}  // namespace

NetworkState initial_state(const SystemConfig& config,
                           const ChannelRealization& channels,
                           std::vector<Point> R) {
  NetworkState s;
  s.f_s.assign(static_cast<std::size_t>(config.U), config.f_ser / config.U);
  s.q.assign(static_cast<std::size_t>(config.U), 16);
  const Eigen::Index M = channels.H.front().rows();
  const Eigen::Index A = channels.H.front().cols();
  s.W.resize(M, config.U * A);
  for (int u = 0; u < config.U; ++u) {
    s.W.middleCols(u * A, A) = channels.H[static_cast<std::size_t>(u)];
  }
  s.W = project_unit_columns(s.W);
  s.R = std::move(R);
  return s;
}

double relative_change(double loss, double previous) {
  return std::abs(loss - previous) / std::max(std::abs(previous), 1e-12);
}

BcdResult run_bcd(const NetworkState& initial, const ChannelModel& model,
                  const PowerAllocation& powers, const SystemConfig& config,
                  const BcdOptions& options) {
  const SystemConfig cfg = config.normalized();
  cfg.validate();
  check_state_feasible(initial, cfg);

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();

  BcdResult result;
  NetworkState state = initial;
  ChannelRealization channels = model.build(state.R);
  LossBreakdown current = total_loss(state, channels, powers, cfg);
  result.trace.initial_loss = current.loss;
  result.trace.breakdowns.push_back(current);

  // Accept a candidate state only if it does not raise the total loss.
  auto try_accept = [&](NetworkState&& candidate, const ChannelRealization* new_channels) {
    const auto& ch = new_channels ? *new_channels : channels;
    LossBreakdown loss = total_loss(candidate, ch, powers, cfg);
    if (loss.loss <= current.loss) {
      state = std::move(candidate);
      current = std::move(loss);
      if (new_channels) channels = *new_channels;
    }
  };

  double previous = current.loss;
  for (int it = 1; it <= options.max_iterations; ++it) {
    BcdIteration row;
    row.iteration = it;

    if (options.update_frequencies) {
      in_block("frequency", it, [&] {
        NetworkState cand = state;
        cand.f_s = allocate_frequencies(cfg.c_s, cfg.d_model, cfg.f_ser);
        try_accept(std::move(cand), nullptr);
        return 0;
      });
    }
    row.loss_after_freq = current.loss;

    if (options.update_digits) {
      in_block("quantization", it, [&] {
        const QuantResult qr = solve_quant(state.q, current.R_ul, cfg);
        if (qr.q != state.q) {
          NetworkState cand = state;
          cand.q = qr.q;
          try_accept(std::move(cand), nullptr);
        }
        return 0;
      });
    }
    row.loss_after_quant = current.loss;

    if (options.update_beamforming) {
      in_block("beamforming", it, [&] {
        const auto weights = latency_weights(state.q, cfg);
        const BeamformingObjective f(channels, powers, weights, cfg.sigma2);
        RadmmResult rr = radmm_solve(state.W, f, options.radmm);
        row.radmm_iterations = rr.iterations;
        for (const auto& t : rr.trace) result.trace.radmm.push_back({it, t});
        if (!rr.kept_incumbent) {
          NetworkState cand = state;
          cand.W = std::move(rr.W);
          try_accept(std::move(cand), nullptr);
        }
        return 0;
      });
    }
    row.loss_after_beam = current.loss;

    if (options.update_positions) {
      in_block("position", it, [&] {
        FaResult fr = optimize_positions(model, state.W, powers, state.q, cfg, state.R, options.fa);
        if (fr.R != state.R) {
          NetworkState cand = state;
          cand.R = fr.R;
          const ChannelRealization ch = model.build(cand.R);
          try_accept(std::move(cand), &ch);
        }
        result.position_history.push_back(state.R);
        return 0;
      });
    }
    row.loss_after_fa = current.loss;

    row.loss = current.loss;
    row.rel_change = relative_change(current.loss, previous);
    row.wall_time_s = std::chrono::duration<double>(Clock::now() - t0).count();
    result.trace.iterations.push_back(row);
    result.trace.breakdowns.push_back(current);
    previous = current.loss;
    if (row.rel_change < cfg.epsilon) {
      result.trace.converged = true;
      break;
    }
  }

  result.state = std::move(state);
  result.breakdown = std::move(current);
  return result;
}

void write_trace_csv(std::ostream& out, const BcdTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,loss,loss_after_freq,loss_after_quant,loss_after_beam,"
        "loss_after_fa,rel_change,wall_time_s,radmm_iterations\n";
  os << 0 << ',' << trace.initial_loss << ",,,,,,0,0\n";
  for (const auto& r : trace.iterations) {
    os << r.iteration << ',' << r.loss << ',' << r.loss_after_freq << ','
       << r.loss_after_quant << ',' << r.loss_after_beam << ',' << r.loss_after_fa
       << ',' << r.rel_change << ',' << r.wall_time_s << ',' << r.radmm_iterations << '\n';
  }
  out << os.str();
}

void write_breakdown_csv(std::ostream& out, std::uint64_t seed, const BcdTrace& trace) {
  const int U = trace.breakdowns.empty() ? 0 : static_cast<int>(trace.breakdowns.front().T_fo.size());
  write_loss_csv_header(out, U);
  for (std::size_t i = 0; i < trace.breakdowns.size(); ++i) {
    write_loss_csv_row(out, seed, static_cast<int>(i), trace.breakdowns[i]);
  }
}

void write_radmm_trace_csv(std::ostream& out, const BcdTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "bcd_iteration,pass,radmm_iteration,f3,residual,rho\n";
  for (const auto& r : trace.radmm) {
    os << r.bcd_iteration << ',' << r.row.pass << ',' << r.row.iteration << ',' << r.row.f3 << ','
       << r.row.residual << ',' << r.row.rho << '\n';
  }
  out << os.str();
}

void write_state_json(std::ostream& out, const BcdResult& result) {
  nlohmann::json j;
  const auto& s = result.state;
  j["f_s"] = s.f_s;
  j["q"] = s.q;
  auto W = nlohmann::json::array();
  for (Eigen::Index c = 0; c < s.W.cols(); ++c) {
    auto col = nlohmann::json::array();
    for (Eigen::Index r = 0; r < s.W.rows(); ++r) col.push_back({s.W(r, c).real(), s.W(r, c).imag()});
    W.push_back(col);
  }
  j["W_columns"] = W;
  auto positions = [](const std::vector<Point>& R) {
    auto arr = nlohmann::json::array();
    for (std::size_t m = 0; m < R.size(); ++m) {
      arr.push_back({{"antenna", m}, {"x", R[m].x}, {"y", R[m].y}});
    }
    return arr;
  };
  j["R"] = positions(s.R);
  auto history = nlohmann::json::array();
  for (const auto& R : result.position_history) history.push_back(positions(R));
  j["R_per_iteration"] = history;
  const auto& b = result.breakdown;
  j["breakdown"] = {{"T_fo", b.T_fo}, {"T_si", b.T_si}, {"PSNR", b.PSNR},
                    {"R_ul", b.R_ul}, {"loss", b.loss}, {"feasible", b.feasible}};
  j["iterations"] = result.trace.iterations.size();
  j["converged"] = result.trace.converged;
  out << j.dump(2) << '\n';
}

}  // namespace fluidnet
