#pragma once

#include <span>
#include <vector>

#include "fluidnet/comm_metrics.hpp"
#include "fluidnet/geometry_channel.hpp"
#include "fluidnet/types.hpp"

namespace fluidnet {

struct RadmmParams {
  double rho0 = 5.0;
  double rho_growth = 1.2;
  double step_gamma = 0.1;        // retraction step, measured on g / rho
  double residual_tol = 1e-6;     // ||W - W_aux||_F at exit
  int max_outer = 200;
  int max_primal_steps = 50;
  double backtrack_shrink = 0.5;
  double sufficient_decrease = 1e-4;
  int max_aux_steps = 1000;
  double aux_tol = 1e-12;         // relative tangent-gradient norm per column
  // Warm-restarted passes: each pass resets rho and the dual and starts from
  // the previous pass's feasible output. Passes stop once f3 improves by less
  // than pass_tol relative.
  int max_passes = 300;
  double pass_tol = 1e-6;
  bool record_trace = false;
};

/// Primal W, auxiliary W_aux (unit columns), multiplier `dual`, penalty rho.
struct RadmmState {
  CMatrix W;
  CMatrix W_aux;
  CMatrix dual;
  double rho = 5.0;
  double step_gamma = 0.1;
};

/// Weighted offloading latency sum_u c_u / R_u(W) with c_u = q_u D_u / b.
///
/// Rates use the determinant-ratio form
///   R_u = log2 det(W_u^H T W_u) - log2 det(W_u^H Q_u W_u),
/// with T = sigma2 I + sum_k H_k P_k H_k^H and Q_u = T - H_u P_u H_u^H, which
/// equals the whitened-covariance rate in comm_metrics.
class BeamformingObjective {
public:
  BeamformingObjective(const ChannelRealization& channels,
                       const PowerAllocation& powers,
                       std::span<const double> weights, double sigma2);

  /// Returns -1 when either Gram matrix is not positive definite.
  double rate(int u, const CMatrix& W) const;

  /// +inf when some user block is rank deficient.
  double value(const CMatrix& W) const;

  /// Real gradient G with value(W + dW) ~ value(W) + Re tr(G^H dW).
  CMatrix gradient(const CMatrix& W) const;

  int num_users() const { return static_cast<int>(weights_.size()); }
  int antennas_per_user() const { return static_cast<int>(A_); }
  Eigen::Index num_bs() const { return T_.rows(); }

private:
  Eigen::Index A_;
  std::vector<double> weights_;
  CMatrix T_;
  std::vector<CMatrix> Q_;
};

/// Latency weights q_u D_u / b for the objective above.
std::vector<double> latency_weights(std::span<const int> q, const SystemConfig& config);

/// f3(W) + Re tr(dual^H (W - W_aux)) + rho/2 ||W - W_aux||_F^2
double augmented_lagrangian(const BeamformingObjective& f, const CMatrix& W,
                            const RadmmState& state);
CMatrix augmented_lagrangian_gradient(const BeamformingObjective& f,
                                      const CMatrix& W, const RadmmState& state);

/// Backtracking gradient descent on the augmented Lagrangian, starting at
/// state.W. Never returns a point with a larger value.
CMatrix update_primal(const RadmmState& state, const BeamformingObjective& f,
                      const RadmmParams& params);

/// Columnwise v_j = xi_j - Re{w_j^H xi_j} w_j.
CMatrix tangent_project(const CMatrix& grad, const CMatrix& W_aux);

/// g(W_aux) = Re tr(dual^H (W - W_aux)) + rho/2 ||W - W_aux||_F^2
double aux_objective(const RadmmState& state, const CMatrix& W_aux);

/// Riemannian gradient descent on g over unit-norm columns with a
/// normalization retraction, started from state.W_aux.
CMatrix update_auxiliary(const RadmmState& state, const RadmmParams& params);

/// dual + rho (W - W_aux)
CMatrix update_dual(const RadmmState& state);

CMatrix project_unit_columns(const CMatrix& W);

/// rho0 * growth^k
double penalty_at(int k, const RadmmParams& params);

struct RadmmTraceRow {
  int pass = 0;
  int iteration = 0;
  double f3 = 0.0;
  double residual = 0.0;
  double rho = 0.0;
};

struct RadmmResult {
  CMatrix W;
  double f3_initial = 0.0;
  double f3_final = 0.0;
  double residual = 0.0;
  int iterations = 0;            // ADMM iterations summed over passes
  int passes = 0;
  bool converged = false;        // last pass reached the residual before max_outer
  bool kept_incumbent = false;   // ADMM output was worse than W0
  std::vector<RadmmTraceRow> trace;
};

/// One ADMM pass over (W, W_aux, dual) with the penalty schedule rho_k,
/// stopped by the primal residual. Returns the unit-column projection of W
/// without the incumbent safeguard.
RadmmResult radmm_pass(const CMatrix& W0, const BeamformingObjective& f,
                       const RadmmParams& params = {}, int pass = 0);

/// Repeated passes until f3 stalls. The returned W has unit columns and
/// never a larger f3 than W0.
RadmmResult radmm_solve(const CMatrix& W0, const BeamformingObjective& f,
                        const RadmmParams& params = {});

}  // namespace fluidnet
