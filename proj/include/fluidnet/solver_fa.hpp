#pragma once

#include <span>
#include <vector>

#include "fluidnet/comm_metrics.hpp"
#include "fluidnet/geometry_channel.hpp"

namespace fluidnet {

struct PanelRegion {
  double L = 0.0;

  bool contains(const Point& p) const {
    return p.x >= 0.0 && p.x <= L && p.y >= 0.0 && p.y <= L;
  }
};

struct FaSearchParams {
  double resolution = 0.0;      // coarse grid pitch [m]; <= 0 means lambda/10
  double shrink = 0.5;          // refinement stencil shrink per round
  int refine_rounds = 3;
  double improvement_tol = 1e-3;  // relative improvement needed to accept a move
  int max_sweeps = 1;
};

/// Offloading latency sum_u q_u D_u / (b R_u) as a function of the BS antenna
/// positions, with W fixed. Moving one antenna only rewrites row m of every
/// H_u, so candidates are scored through rank-one updates of W_u^H H_k.
class PositionObjective {
public:
  PositionObjective(const ChannelModel& model, const CMatrix& W,
                    const PowerAllocation& powers, std::span<const int> q,
                    const SystemConfig& config, std::vector<Point> R);

  double value() const { return value_; }
  double value_with(int m, const Point& r) const;
  void commit(int m, const Point& r);

  const std::vector<Point>& positions() const { return R_; }

private:
  double evaluate(const std::vector<CMatrix>& G) const;
  void compute_rows(const Point& r, std::vector<Eigen::RowVectorXcd>& rows) const;

  const ChannelModel& model_;
  CMatrix W_;
  std::vector<RVector> p_;
  std::vector<double> q_;
  std::vector<double> D_;
  double b_;
  double sigma2_;
  int U_;
  Eigen::Index A_;
  std::vector<Point> R_;
  std::vector<std::vector<Eigen::RowVectorXcd>> rows_;  // rows_[k][m]
  std::vector<CMatrix> G_;                              // G_[u*U+k] = W_u^H H_k
  std::vector<CMatrix> noise_;                          // sigma2 W_u^H W_u
  double value_ = 0.0;
};

/// Coarse panel grid: 0, h, 2h, ... and L itself.
std::vector<double> grid_axis(double L, double resolution);

/// Best feasible position for antenna m: coarse grid, then shrinking 3x3
/// stencil refinement. Returns the current position unless the improvement
/// exceeds improvement_tol (relative).
Point optimize_position_m(int m, const PositionObjective& objective,
                          const SystemConfig& config, const FaSearchParams& params);

struct FaResult {
  std::vector<Point> R;
  double f4_initial = 0.0;
  double f4_final = 0.0;
  int sweeps = 0;
  std::vector<std::vector<Point>> sweep_positions;
};

FaResult optimize_positions(const ChannelModel& model, const CMatrix& W,
                            const PowerAllocation& powers, std::span<const int> q,
                            const SystemConfig& config, std::vector<Point> R,
                            const FaSearchParams& params = {});

}  // namespace fluidnet
