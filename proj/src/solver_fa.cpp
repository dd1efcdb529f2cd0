#include "fluidnet/solver_fa.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fluidnet {
namespace {

bool logdet_pd(const CMatrix& X, double& out) {
  Eigen::LLT<CMatrix> llt(X);
  if (llt.info() != Eigen::Success) return false;
  double s = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double d = std::real(llt.matrixLLT()(i, i));
    if (!(d > 0.0)) return false;
    s += std::log(d);
  }
  out = 2.0 * s;
  return true;
}

bool spacing_ok(int m, const Point& r, const std::vector<Point>& R, double D_min) {
  for (std::size_t l = 0; l < R.size(); ++l) {
    if (static_cast<int>(l) == m) continue;
    if (distance(r, R[l]) < D_min) return false;
  }
  return true;
}

}  // namespace

PositionObjective::PositionObjective(const ChannelModel& model, const CMatrix& W,
                                     const PowerAllocation& powers,
                                     std::span<const int> q,
                                     const SystemConfig& config,
                                     std::vector<Point> R)
    : model_(model),
      W_(W),
      p_(powers.p),
      q_(q.begin(), q.end()),
      b_(config.b),
      sigma2_(config.sigma2),
      U_(model.num_users()),
      A_(model.antennas_per_user()),
      R_(std::move(R)) {
  const SystemConfig cfg = config.normalized();
  D_ = cfg.D_feat;
  const auto M = static_cast<Eigen::Index>(R_.size());
  require(W_.rows() == M && W_.cols() == U_ * A_, ErrorCode::InvalidInput,
          "beamformer shape does not match the antenna layout");
  rows_.assign(static_cast<std::size_t>(U_), {});
  for (int k = 0; k < U_; ++k) {
    for (const auto& r : R_) rows_[static_cast<std::size_t>(k)].push_back(model_.row(k, r));
  }
  for (int u = 0; u < U_; ++u) {
    const auto Wu = W_.middleCols(u * A_, A_);
    noise_.push_back(sigma2_ * (Wu.adjoint() * Wu));
    for (int k = 0; k < U_; ++k) {
      CMatrix G = CMatrix::Zero(A_, A_);
      for (Eigen::Index m = 0; m < M; ++m) {
        G += Wu.row(m).adjoint() * rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)];
      }
      G_.push_back(std::move(G));
    }
  }
  value_ = evaluate(G_);
}

void PositionObjective::compute_rows(const Point& r,
                                     std::vector<Eigen::RowVectorXcd>& rows) const {
  rows.resize(static_cast<std::size_t>(U_));
  for (int k = 0; k < U_; ++k) rows[static_cast<std::size_t>(k)] = model_.row(k, r);
}

double PositionObjective::evaluate(const std::vector<CMatrix>& G) const {
  double total = 0.0;
  for (int u = 0; u < U_; ++u) {
    CMatrix XQ = noise_[static_cast<std::size_t>(u)];
    for (int k = 0; k < U_; ++k) {
      if (k == u) continue;
      const auto& Guk = G[static_cast<std::size_t>(u * U_ + k)];
      XQ += Guk * p_[static_cast<std::size_t>(k)].asDiagonal() * Guk.adjoint();
    }
    const auto& Guu = G[static_cast<std::size_t>(u * U_ + u)];
    const CMatrix XT = XQ + Guu * p_[static_cast<std::size_t>(u)].asDiagonal() * Guu.adjoint();
    double ld_t = 0.0;
    double ld_q = 0.0;
    double rate = 0.0;
    if (logdet_pd(XT, ld_t) && logdet_pd(XQ, ld_q)) {
      rate = std::max(0.0, (ld_t - ld_q) / std::numbers::ln2);
    }
    total += offload_latency(q_[static_cast<std::size_t>(u)],
                             D_[static_cast<std::size_t>(u)], b_, rate);
  }
  return total;
}

double PositionObjective::value_with(int m, const Point& r) const {
  std::vector<Eigen::RowVectorXcd> rows;
  compute_rows(r, rows);
  std::vector<CMatrix> G = G_;
  for (int u = 0; u < U_; ++u) {
    const auto w_m = W_.row(m).segment(u * A_, A_).adjoint();
    for (int k = 0; k < U_; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      G[static_cast<std::size_t>(u * U_ + k)] +=
          w_m * (rows[kk] - rows_[kk][static_cast<std::size_t>(m)]);
    }
  }
  return evaluate(G);
}

void PositionObjective::commit(int m, const Point& r) {
  std::vector<Eigen::RowVectorXcd> rows;
  compute_rows(r, rows);
  for (int u = 0; u < U_; ++u) {
    const auto w_m = W_.row(m).segment(u * A_, A_).adjoint();
    for (int k = 0; k < U_; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      G_[static_cast<std::size_t>(u * U_ + k)] +=
          w_m * (rows[kk] - rows_[kk][static_cast<std::size_t>(m)]);
    }
  }
  for (int k = 0; k < U_; ++k) {
    rows_[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] = rows[static_cast<std::size_t>(k)];
  }
  R_[static_cast<std::size_t>(m)] = r;
  value_ = evaluate(G_);
}

std::vector<double> grid_axis(double L, double resolution) {
  require(resolution > 0 && L > 0, ErrorCode::InvalidInput,
          "grid resolution and panel side must be positive");
  std::vector<double> axis;
  const auto n = static_cast<long>(std::floor(L / resolution + 1e-9));
  for (long i = 0; i <= n; ++i) axis.push_back(std::min(L, static_cast<double>(i) * resolution));
  if (L - axis.back() > 1e-12 * L) axis.push_back(L);
  return axis;
}

Point optimize_position_m(int m, const PositionObjective& objective,
                          const SystemConfig& config, const FaSearchParams& params) {
  const auto& R = objective.positions();
  const Point current = R[static_cast<std::size_t>(m)];
  const double f_current = objective.value();
  const PanelRegion panel{config.L};
  const double resolution = params.resolution > 0 ? params.resolution : config.lambda / 10.0;

  Point best = current;
  double best_f = f_current;
  auto consider = [&](const Point& cand) {
    if (!panel.contains(cand) || !spacing_ok(m, cand, R, config.D_min)) return;
    const double f = objective.value_with(m, cand);
    const double tie = 1e-12 * std::abs(best_f);
    if (f < best_f - tie) {
      best = cand;
      best_f = f;
    } else if (std::abs(f - best_f) <= tie &&
               distance(cand, current) < distance(best, current)) {
      best = cand;
      best_f = std::min(f, best_f);
    }
  };

  const auto axis = grid_axis(config.L, resolution);
  for (double x : axis) {
    for (double y : axis) consider({x, y});
  }
  double step = resolution * params.shrink;
  for (int round = 0; round < params.refine_rounds; ++round) {
    const Point center = best;
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        consider({center.x + dx * step, center.y + dy * step});
      }
    }
    step *= params.shrink;
  }

  if (best_f < f_current - params.improvement_tol * std::abs(f_current)) return best;
  return current;
}

FaResult optimize_positions(const ChannelModel& model, const CMatrix& W,
                            const PowerAllocation& powers, std::span<const int> q,
                            const SystemConfig& config, std::vector<Point> R,
                            const FaSearchParams& params) {
  require(positions_feasible(R, config.L, config.D_min), ErrorCode::InvalidInput,
          "initial FA positions are infeasible");
  PositionObjective objective(model, W, powers, q, config, std::move(R));
  FaResult result;
  result.f4_initial = objective.value();
  for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
    const double before = objective.value();
    for (int m = 0; m < static_cast<int>(objective.positions().size()); ++m) {
      const Point next = optimize_position_m(m, objective, config, params);
      const Point& cur = objective.positions()[static_cast<std::size_t>(m)];
      if (next.x != cur.x || next.y != cur.y) objective.commit(m, next);
    }
    ++result.sweeps;
    result.sweep_positions.push_back(objective.positions());
    if (before - objective.value() <= params.improvement_tol * std::abs(before)) break;
  }
  result.R = objective.positions();
  result.f4_final = objective.value();
  return result;
}

}  // namespace fluidnet
