#include "fluidnet/solver_beamforming.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fluidnet {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log det of a Hermitian positive definite matrix; false if not PD.
bool hermitian_logdet(const CMatrix& X, double& out) {
  Eigen::LLT<CMatrix> llt(X);
  if (llt.info() != Eigen::Success) return false;
  double s = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double d = std::real(llt.matrixLLT()(i, i));
    if (!(d > 0.0)) return false;
    s += std::log(d);
  }
  out = 2.0 * s;
  return std::isfinite(out);
}

}  // namespace

BeamformingObjective::BeamformingObjective(const ChannelRealization& channels,
                                           const PowerAllocation& powers,
                                           std::span<const double> weights,
                                           double sigma2)
    : A_(channels.H.front().cols()), weights_(weights.begin(), weights.end()) {
  const int U = channels.num_users();
  require(static_cast<int>(weights_.size()) == U, ErrorCode::InvalidInput,
          "one latency weight per user is required");
  const Eigen::Index M = channels.H.front().rows();
  std::vector<CMatrix> signal;
  signal.reserve(static_cast<std::size_t>(U));
  for (int k = 0; k < U; ++k) {
    const auto& H = channels.H[static_cast<std::size_t>(k)];
    signal.push_back(H * powers.p[static_cast<std::size_t>(k)].asDiagonal() * H.adjoint());
  }
  T_ = sigma2 * CMatrix::Identity(M, M);
  for (const auto& s : signal) T_ += s;
  for (int u = 0; u < U; ++u) {
    CMatrix Q = sigma2 * CMatrix::Identity(M, M);
    for (int k = 0; k < U; ++k) {
      if (k != u) Q += signal[static_cast<std::size_t>(k)];
    }
    Q_.push_back(std::move(Q));
  }
}

double BeamformingObjective::rate(int u, const CMatrix& W) const {
  const auto Wu = W.middleCols(u * A_, A_);
  double ld_t = 0.0;
  double ld_q = 0.0;
  if (!hermitian_logdet(Wu.adjoint() * T_ * Wu, ld_t) ||
      !hermitian_logdet(Wu.adjoint() * Q_[static_cast<std::size_t>(u)] * Wu, ld_q)) {
    return -1.0;
  }
  return std::max(0.0, (ld_t - ld_q) / std::numbers::ln2);
}

double BeamformingObjective::value(const CMatrix& W) const {
  double total = 0.0;
  for (int u = 0; u < num_users(); ++u) {
    const double c = weights_[static_cast<std::size_t>(u)];
    if (c == 0.0) continue;
    const double r = rate(u, W);
    if (!(r > 0.0)) return kInf;
    total += c / r;
  }
  return total;
}

CMatrix BeamformingObjective::gradient(const CMatrix& W) const {
  CMatrix G = CMatrix::Zero(W.rows(), W.cols());
  for (int u = 0; u < num_users(); ++u) {
    const double c = weights_[static_cast<std::size_t>(u)];
    if (c == 0.0) continue;
    const auto Wu = W.middleCols(u * A_, A_);
    const CMatrix TW = T_ * Wu;
    const CMatrix QW = Q_[static_cast<std::size_t>(u)] * Wu;
    const CMatrix XT = Wu.adjoint() * TW;
    const CMatrix XQ = Wu.adjoint() * QW;
    double ld_t = 0.0;
    double ld_q = 0.0;
    if (!hermitian_logdet(XT, ld_t) || !hermitian_logdet(XQ, ld_q)) {
      fail(ErrorCode::Numerical, "beamformer block of user " + std::to_string(u) +
                                     " is rank deficient");
    }
    const double r = (ld_t - ld_q) / std::numbers::ln2;
    if (!(r > 0.0)) {
      fail(ErrorCode::Numerical, "non-positive rate for user " + std::to_string(u));
    }
    // d log det(W^H A W) -> 2 A W (W^H A W)^{-1}
    const CMatrix dR = (2.0 / std::numbers::ln2) *
                       (TW * XT.llt().solve(CMatrix::Identity(A_, A_)) -
                        QW * XQ.llt().solve(CMatrix::Identity(A_, A_)));
    G.middleCols(u * A_, A_) = (-c / (r * r)) * dR;
  }
  return G;
}

std::vector<double> latency_weights(std::span<const int> q, const SystemConfig& config) {
  const SystemConfig cfg = config.normalized();
  std::vector<double> w;
  for (std::size_t u = 0; u < q.size(); ++u) w.push_back(q[u] * cfg.D_feat[u] / cfg.b);
  return w;
}

double augmented_lagrangian(const BeamformingObjective& f, const CMatrix& W,
                            const RadmmState& state) {
  const double latency = f.value(W);
  if (!std::isfinite(latency)) return kInf;
  const CMatrix diff = W - state.W_aux;
  return latency + std::real((state.dual.adjoint() * diff).trace()) +
         0.5 * state.rho * diff.squaredNorm();
}

CMatrix augmented_lagrangian_gradient(const BeamformingObjective& f,
                                      const CMatrix& W, const RadmmState& state) {
  return f.gradient(W) + state.dual + state.rho * (W - state.W_aux);
}

CMatrix update_primal(const RadmmState& state, const BeamformingObjective& f,
                      const RadmmParams& params) {
  CMatrix W = state.W;
  double value = augmented_lagrangian(f, W, state);
  require(std::isfinite(value), ErrorCode::Numerical,
          "augmented Lagrangian is not finite at the current primal iterate");
  double step = 1.0 / state.rho;
  const double grad_floor = 1e-10 * std::max(1.0, state.rho);
  for (int it = 0; it < params.max_primal_steps; ++it) {
    const CMatrix G = augmented_lagrangian_gradient(f, W, state);
    const double g2 = G.squaredNorm();
    if (!std::isfinite(g2)) {
      fail(ErrorCode::Numerical,
           "non-finite primal gradient at inner step " + std::to_string(it));
    }
    if (std::sqrt(g2) <= grad_floor) break;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      CMatrix trial = W - step * G;
      const double v = augmented_lagrangian(f, trial, state);
      if (v <= value - params.sufficient_decrease * step * g2) {
        W = std::move(trial);
        value = v;
        accepted = true;
        break;
      }
      step *= params.backtrack_shrink;
    }
    if (!accepted) break;
    step /= params.backtrack_shrink;
  }
  return W;
}

CMatrix tangent_project(const CMatrix& grad, const CMatrix& W_aux) {
  CMatrix v = grad;
  for (Eigen::Index j = 0; j < grad.cols(); ++j) {
    const double radial = std::real(W_aux.col(j).dot(grad.col(j)));
    v.col(j) -= radial * W_aux.col(j);
  }
  return v;
}

double aux_objective(const RadmmState& state, const CMatrix& W_aux) {
  const CMatrix diff = state.W - W_aux;
  return std::real((state.dual.adjoint() * diff).trace()) +
         0.5 * state.rho * diff.squaredNorm();
}

CMatrix update_auxiliary(const RadmmState& state, const RadmmParams& params) {
  CMatrix out = project_unit_columns(state.W_aux);
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    // On the unit sphere g/rho reduces to -Re{c^H w} + const.
    const CVector c = state.W.col(j) + state.dual.col(j) / state.rho;
    const double c_norm = c.norm();
    CVector w = out.col(j);
    double gamma = state.step_gamma;
    for (int it = 0; it < params.max_aux_steps; ++it) {
      const CVector xi = w - c;
      CVector v = xi - std::real(w.dot(xi)) * w;
      if (v.norm() <= params.aux_tol * std::max(1.0, c_norm)) break;
      const double h_old = -std::real(c.dot(w));
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(h_old) + c_norm);
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving) {
        CVector trial = w - gamma * v;
        const double n = trial.norm();
        if (n > 1e-12) {
          trial /= n;
          if (-std::real(c.dot(trial)) <= h_old + slack) {
            w = std::move(trial);
            accepted = true;
            break;
          }
        }
        gamma *= 0.5;
      }
      if (!accepted) break;
    }
    out.col(j) = w;
  }
  return out;
}

CMatrix update_dual(const RadmmState& state) {
  return state.dual + state.rho * (state.W - state.W_aux);
}

CMatrix project_unit_columns(const CMatrix& W) {
  CMatrix out = W;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) {
      out.col(j) /= n;
    } else {
      out.col(j).setZero();
      out(j % out.rows(), j) = 1.0;
    }
  }
  return out;
}

double penalty_at(int k, const RadmmParams& params) {
  return params.rho0 * std::pow(params.rho_growth, k);
}

RadmmResult radmm_pass(const CMatrix& W0, const BeamformingObjective& f,
                       const RadmmParams& params, int pass) {
  RadmmResult result;
  result.f3_initial = f.value(W0);
  result.passes = 1;
  RadmmState state;
  state.W = W0;
  state.W_aux = W0;
  state.dual = CMatrix::Zero(W0.rows(), W0.cols());
  state.step_gamma = params.step_gamma;

  for (int k = 0; k < params.max_outer; ++k) {
    state.rho = penalty_at(k, params);
    state.W = update_primal(state, f, params);
    state.W_aux = update_auxiliary(state, params);
    state.dual = update_dual(state);
    result.residual = (state.W - state.W_aux).norm();
    result.iterations = k + 1;
    if (params.record_trace) {
      result.trace.push_back({pass, k, f.value(state.W_aux), result.residual, state.rho});
    }
    if (result.residual <= params.residual_tol) {
      result.converged = true;
      break;
    }
  }
  result.W = project_unit_columns(state.W);
  result.f3_final = f.value(result.W);
  return result;
}

RadmmResult radmm_solve(const CMatrix& W0, const BeamformingObjective& f,
                        const RadmmParams& params) {
  for (Eigen::Index j = 0; j < W0.cols(); ++j) {
    require(std::abs(W0.col(j).norm() - 1.0) <= 1e-9, ErrorCode::InvalidInput,
            "initial beamformer columns must have unit norm");
  }
  RadmmResult result;
  result.W = W0;
  result.f3_initial = f.value(W0);
  result.f3_final = result.f3_initial;
  result.kept_incumbent = true;
  const int passes = std::max(1, params.max_passes);
  for (int p = 0; p < passes; ++p) {
    RadmmResult r = radmm_pass(result.W, f, params, p);
    result.passes = p + 1;
    result.iterations += r.iterations;
    result.residual = r.residual;
    result.converged = r.converged;
    result.trace.insert(result.trace.end(), r.trace.begin(), r.trace.end());
    const double before = result.f3_final;
    if (!(r.f3_final <= before)) break;
    result.W = std::move(r.W);
    result.f3_final = r.f3_final;
    result.kept_incumbent = false;
    if (before - r.f3_final < params.pass_tol * std::abs(before)) break;
  }
  return result;
}

}  // namespace fluidnet
