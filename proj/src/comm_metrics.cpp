#include "fluidnet/comm_metrics.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fluidnet {

PowerAllocation equal_power(const SystemConfig& config) {
  PowerAllocation p;
  p.p.assign(static_cast<std::size_t>(config.U),
             RVector::Constant(config.A, config.P_user / config.A));
  return p;
}

double LossBreakdown::total_latency() const {
  return std::accumulate(T_fo.begin(), T_fo.end(), 0.0) +
         std::accumulate(T_si.begin(), T_si.end(), 0.0);
}

double LossBreakdown::total_psnr() const {
  return std::accumulate(PSNR.begin(), PSNR.end(), 0.0);
}

CMatrix interference_covariance(int u, const CMatrix& W,
                                const ChannelRealization& channels,
                                const PowerAllocation& powers, double sigma2) {
  const int U = channels.num_users();
  require(u >= 0 && u < U, ErrorCode::InvalidInput, "user index out of range");
  const Eigen::Index A = channels.H.front().cols();
  require(W.cols() == U * A && W.rows() == channels.H.front().rows(),
          ErrorCode::InvalidInput, "beamformer shape does not match the channel");
  const auto Wu = W.middleCols(u * A, A);
  CMatrix Z = sigma2 * (Wu.adjoint() * Wu);
  for (int k = 0; k < U; ++k) {
    if (k == u) continue;
    const CMatrix G = Wu.adjoint() * channels.H[static_cast<std::size_t>(k)];
    Z += G * powers.p[static_cast<std::size_t>(k)].asDiagonal() * G.adjoint();
  }
  return Z;
}

double uplink_rate(int u, const CMatrix& W, const ChannelRealization& channels,
                   const PowerAllocation& powers, double sigma2) {
  const CMatrix Z = interference_covariance(u, W, channels, powers, sigma2);
  const Eigen::Index A = Z.rows();
  Eigen::LLT<CMatrix> chol(Z);
  if (chol.info() != Eigen::Success) {
    fail(ErrorCode::Numerical, "interference-plus-noise covariance of user " +
                                   std::to_string(u) + " is not positive definite");
  }
  const auto Wu = W.middleCols(u * A, A);
  const CMatrix S = Wu.adjoint() * channels.H[static_cast<std::size_t>(u)] *
                    powers.p[static_cast<std::size_t>(u)].cwiseSqrt().asDiagonal();
  const CMatrix X = chol.matrixL().solve(S);
  const CMatrix I_plus = CMatrix::Identity(A, A) + X * X.adjoint();
  Eigen::LLT<CMatrix> outer(I_plus);
  if (outer.info() != Eigen::Success) {
    fail(ErrorCode::Numerical, "rate matrix of user " + std::to_string(u) + " lost definiteness");
  }
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < A; ++i) logdet += std::log(std::real(outer.matrixLLT()(i, i)));
  const double rate = 2.0 * logdet / std::log(2.0);
  require(std::isfinite(rate), ErrorCode::Numerical, "non-finite uplink rate");
  return std::max(rate, 0.0);
}

double offload_latency(double q, double D, double b, double rate) {
  if (!(rate > 0.0)) return kLatencySentinel;
  return q * D / (b * rate);
}

double inference_latency(double c_s, double d, double f) {
  require(f > 0.0, ErrorCode::InvalidInput, "server frequency must be positive");
  return c_s * d / f;
}

double psnr(double q, double x_min, double x_max, double sigma_xmax) {
  require(q > 0.0 && x_max > x_min, ErrorCode::InvalidInput,
          "psnr requires q > 0 and x_max > x_min");
  const double levels = std::exp2(q) - 1.0;
  const double range = x_max - x_min;
  return 10.0 * std::log10(12.0 * sigma_xmax * sigma_xmax * levels * levels / (range * range));
}

LossBreakdown total_loss(const NetworkState& state,
                         const ChannelRealization& channels,
                         const PowerAllocation& powers,
                         const SystemConfig& config) {
  const SystemConfig cfg = config.normalized();
  const int U = cfg.U;
  require(channels.num_users() == U && static_cast<int>(state.q.size()) == U &&
              static_cast<int>(state.f_s.size()) == U,
          ErrorCode::InvalidInput, "state and channel user counts disagree");
  LossBreakdown out;
  double latency = 0.0;
  double total_psnr = 0.0;
  for (int u = 0; u < U; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    const double rate = uplink_rate(u, state.W, channels, powers, cfg.sigma2);
    const double t_fo = offload_latency(state.q[uu], cfg.D_feat[uu], cfg.b, rate);
    if (t_fo == kLatencySentinel) out.feasible = false;
    const double t_si = inference_latency(cfg.c_s, cfg.d_model[uu], state.f_s[uu]);
    const double p = psnr(state.q[uu], cfg.x_min, cfg.x_max, cfg.sigma_xmax);
    out.R_ul.push_back(rate);
    out.T_fo.push_back(t_fo);
    out.T_si.push_back(t_si);
    out.PSNR.push_back(p);
    latency += t_fo + t_si;
    total_psnr += p;
  }
  out.loss = latency - cfg.alpha * total_psnr;
  return out;
}

void check_state_feasible(const NetworkState& state, const SystemConfig& config) {
  const int U = config.U;
  const int A = config.A;
  auto check = [](bool ok, const std::string& msg) {
    require(ok, ErrorCode::InvalidInput, msg);
  };
  check(static_cast<int>(state.f_s.size()) == U, "f_s must have U entries");
  check(static_cast<int>(state.q.size()) == U, "q must have U entries");
  double total = 0.0;
  for (double f : state.f_s) {
    check(f > 0.0, "server frequencies must be positive");
    total += f;
  }
  check(total <= config.f_ser * (1.0 + 1e-12), "server frequency budget exceeded");
  for (int q : state.q) check(is_feasible_digit(q), "quantization digits must be in {4,8,16,32}");
  check(state.W.rows() == config.M && state.W.cols() == U * A,
        "beamformer must be M x (U*A)");
  for (Eigen::Index j = 0; j < state.W.cols(); ++j) {
    check(std::abs(state.W.col(j).norm() - 1.0) <= 1e-9, "beamformer columns must have unit norm");
  }
  check(static_cast<int>(state.R.size()) == config.M, "R must hold M positions");
  check(positions_feasible(state.R, config.L, config.D_min),
        "FA positions violate the panel or spacing constraints");
}

void write_loss_csv_header(std::ostream& out, int U) {
  out << "seed,iteration";
  for (const char* name : {"T_fo", "T_si", "PSNR", "R_ul"}) {
    for (int u = 0; u < U; ++u) out << ',' << name << '_' << u;
  }
  out << ",loss\n";
}

void write_loss_csv_row(std::ostream& out, std::uint64_t seed, int iteration,
                        const LossBreakdown& loss) {
  std::ostringstream os;
  os.precision(17);
  os << seed << ',' << iteration;
  for (const auto* v : {&loss.T_fo, &loss.T_si, &loss.PSNR, &loss.R_ul}) {
    for (double x : *v) os << ',' << x;
  }
  os << ',' << loss.loss << '\n';
  out << os.str();
}

}  // namespace fluidnet
