#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fluidnet/comm_metrics.hpp"
#include "fluidnet/solver_fa.hpp"
#include "support.hpp"

using namespace fluidnet;
using namespace fluidnet::testing;

namespace {

// f4 by rebuilding every channel from scratch.
double f4_full(const Instance& inst, const CMatrix& W, const std::vector<Point>& R) {
  const ChannelRealization ch = inst.model.build(R);
  double v = 0;
  for (int u = 0; u < inst.cfg.U; ++u) {
    const double r = uplink_rate(u, W, ch, inst.powers, inst.cfg.sigma2);
    v += offload_latency(inst.state.q[u], inst.cfg.D_feat[u], inst.cfg.b, r);
  }
  return v;
}

bool spacing_ok_oracle(const std::vector<Point>& R, int m, const Point& p, double D) {
  for (int l = 0; l < static_cast<int>(R.size()); ++l) {
    if (l != m && std::hypot(R[l].x - p.x, R[l].y - p.y) < D) return false;
  }
  return true;
}

double min_spacing(const std::vector<Point>& R) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < R.size(); ++i) {
    for (std::size_t j = i + 1; j < R.size(); ++j) d = std::min(d, distance(R[i], R[j]));
  }
  return d;
}

PositionObjective make_objective(const Instance& inst, const CMatrix& W,
                                 const std::vector<Point>& R) {
  return PositionObjective(inst.model, W, inst.powers, inst.state.q, inst.cfg, R);
}

}  // namespace

TEST(GridAxis, IncludesBothEnds) {
  const auto a = grid_axis(1.0, 0.25);
  ASSERT_EQ(a.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(a[i], 0.25 * i, 1e-15);
  const auto b = grid_axis(1.0, 0.3);
  EXPECT_DOUBLE_EQ(b.back(), 1.0);
  EXPECT_NEAR(b[b.size() - 2], 0.9, 1e-15);
}

TEST(PositionObjective, RankOneUpdatesMatchFullRebuild) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Instance inst(default_config(), seed);
    std::mt19937_64 rng(seed);
    const CMatrix W = random_unit_columns(inst.cfg.M, inst.cfg.U * inst.cfg.A, rng);
    PositionObjective obj = make_objective(inst, W, inst.state.R);
    EXPECT_NEAR(obj.value(), f4_full(inst, W, inst.state.R), 1e-10 * obj.value());

    std::uniform_real_distribution<double> pos(0.0, inst.cfg.L);
    std::vector<Point> R = inst.state.R;
    for (int k = 0; k < 12; ++k) {
      const int m = k % inst.cfg.M;
      const Point p{pos(rng), pos(rng)};
      std::vector<Point> moved = R;
      moved[m] = p;
      const double full = f4_full(inst, W, moved);
      EXPECT_NEAR(obj.value_with(m, p), full, 1e-9 * full);
      obj.commit(m, p);
      R = moved;
      EXPECT_NEAR(obj.value(), full, 1e-9 * full);
    }
  }
}

TEST(OptimizePositionM, MatchesExhaustiveGridOnTwoAntennas) {
  SystemConfig cfg = small_config(2, 1, 2);
  cfg.L = 2 * cfg.lambda;
  FaSearchParams p;
  p.resolution = cfg.L / 4;  // 5 x 5 grid
  p.refine_rounds = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst(cfg, seed);
    std::mt19937_64 rng(seed);
    const CMatrix W = random_unit_columns(2, 2, rng);
    const PositionObjective obj = make_objective(inst, W, inst.state.R);
    for (int m = 0; m < 2; ++m) {
      const Point cur = inst.state.R[m];
      Point best = cur;
      double best_f = f4_full(inst, W, inst.state.R);
      const double f_cur = best_f;
      for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 4; ++j) {
          const Point c{i * cfg.L / 4, j * cfg.L / 4};
          if (!spacing_ok_oracle(inst.state.R, m, c, cfg.D_min)) continue;
          std::vector<Point> R = inst.state.R;
          R[m] = c;
          const double f = f4_full(inst, W, R);
          if (f < best_f) {
            best_f = f;
            best = c;
          }
        }
      }
      if (!(best_f < f_cur - p.improvement_tol * f_cur)) best = cur;
      const Point got = optimize_position_m(m, obj, inst.cfg, p);
      EXPECT_NEAR(got.x, best.x, 1e-12) << "seed " << seed << " m " << m;
      EXPECT_NEAR(got.y, best.y, 1e-12) << "seed " << seed << " m " << m;
    }
  }
}

TEST(OptimizePositionM, LargeSpacingBlocksEveryMove) {
  SystemConfig cfg = small_config(1, 1, 2);
  cfg.L = 0.1;
  cfg.D_min = std::hypot(cfg.L, cfg.L);
  Instance inst(cfg, 3);
  ASSERT_TRUE(positions_feasible(inst.state.R, cfg.L, cfg.D_min));
  const PositionObjective obj = make_objective(inst, inst.state.W, inst.state.R);
  for (int m = 0; m < 2; ++m) {
    const Point got = optimize_position_m(m, obj, inst.cfg, FaSearchParams{});
    EXPECT_EQ(got, inst.state.R[m]);
  }
}

TEST(OptimizePositionM, SingleLosAntennaIsPositionInvariant) {
  SystemConfig cfg = small_config(1, 1, 1);
  cfg.N_scatter = 0;
  cfg.K_rician = 1e12;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Instance inst(cfg, seed);
    const PositionObjective obj = make_objective(inst, inst.state.W, inst.state.R);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(0.0, cfg.L);
    for (int k = 0; k < 100; ++k) {
      EXPECT_NEAR(obj.value_with(0, {pos(rng), pos(rng)}), obj.value(), 1e-9 * obj.value());
    }
    const Point got = optimize_position_m(0, obj, inst.cfg, FaSearchParams{});
    EXPECT_NEAR(obj.value_with(0, got), obj.value(), 1e-9 * obj.value());
  }
}

TEST(OptimizePositions, ZeroSweepsLeavesPositions) {
  Instance inst(default_config(), 1);
  FaSearchParams p;
  p.max_sweeps = 0;
  const FaResult r = optimize_positions(inst.model, inst.state.W, inst.powers, inst.state.q,
                                        inst.cfg, inst.state.R, p);
  EXPECT_EQ(r.R, inst.state.R);
  EXPECT_EQ(r.sweeps, 0);
  EXPECT_EQ(r.f4_final, r.f4_initial);
}

TEST(OptimizePositions, FeasibleMonotoneAndDeterministic) {
  FaSearchParams p;
  p.max_sweeps = 3;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Instance inst(default_config(), seed);
    const FaResult r = optimize_positions(inst.model, inst.state.W, inst.powers, inst.state.q,
                                          inst.cfg, inst.state.R, p);
    EXPECT_TRUE(positions_feasible(r.R, inst.cfg.L, inst.cfg.D_min));
    EXPECT_GE(min_spacing(r.R), inst.cfg.lambda / 2);
    for (const Point& x : r.R) {
      EXPECT_GE(x.x, 0.0);
      EXPECT_LE(x.x, inst.cfg.L);
      EXPECT_GE(x.y, 0.0);
      EXPECT_LE(x.y, inst.cfg.L);
    }
    EXPECT_LE(r.f4_final, r.f4_initial);
    EXPECT_NEAR(r.f4_final, f4_full(inst, inst.state.W, r.R), 1e-9 * r.f4_final);
    double prev = r.f4_initial;
    for (const auto& R : r.sweep_positions) {
      EXPECT_TRUE(positions_feasible(R, inst.cfg.L, inst.cfg.D_min));
      const double f = f4_full(inst, inst.state.W, R);
      EXPECT_LE(f, prev * (1 + 1e-12));
      prev = f;
    }
    const FaResult again = optimize_positions(inst.model, inst.state.W, inst.powers,
                                              inst.state.q, inst.cfg, inst.state.R, p);
    EXPECT_EQ(again.R, r.R);
    EXPECT_EQ(again.f4_final, r.f4_final);
  }
}

TEST(OptimizePositions, AcceptedMovesBeatTolerance) {
  FaSearchParams one;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Instance inst(default_config(), seed);
    PositionObjective obj = make_objective(inst, inst.state.W, inst.state.R);
    for (int m = 0; m < inst.cfg.M; ++m) {
      const double before = obj.value();
      const Point next = optimize_position_m(m, obj, inst.cfg, one);
      if (!(next == obj.positions()[m])) {
        EXPECT_LT(obj.value_with(m, next), before - one.improvement_tol * before);
        obj.commit(m, next);
      }
    }
  }
}

TEST(OptimizePositions, RejectsInfeasibleStart) {
  Instance inst(default_config(), 0);
  std::vector<Point> R = inst.state.R;
  R[1] = R[0];
  try {
    optimize_positions(inst.model, inst.state.W, inst.powers, inst.state.q, inst.cfg, R);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}
