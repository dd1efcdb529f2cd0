#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fluidnet/bcd.hpp"
#include "fluidnet/config.hpp"
#include "fluidnet/geometry_channel.hpp"
#include "fluidnet/types.hpp"

namespace fluidnet::testing {

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = cd(n(rng), n(rng));
  }
  return X;
}

inline CMatrix random_unit_columns(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  CMatrix X = random_complex(rows, cols, rng);
  for (Eigen::Index j = 0; j < cols; ++j) X.col(j).normalize();
  return X;
}

inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(n, n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

inline ChannelRealization random_channels(int U, Eigen::Index M, Eigen::Index A,
                                          std::mt19937_64& rng) {
  ChannelRealization ch;
  for (int u = 0; u < U; ++u) ch.H.push_back(random_complex(M, A, rng));
  return ch;
}

inline SystemConfig small_config(int U, int A, int M) {
  SystemConfig cfg = default_config();
  cfg.U = U;
  cfg.A = A;
  cfg.M = M;
  return cfg;
}

// Sampled scenario plus everything needed to run a block solver on it.
struct Instance {
  SystemConfig cfg;
  Scenario scenario;
  ChannelModel model;
  PowerAllocation powers;
  ChannelRealization channels;
  NetworkState state;

  Instance(const SystemConfig& c, std::uint64_t seed)
      : cfg(c.normalized()),
        scenario(sample_scenario(cfg, seed)),
        model(scenario.geometry, scenario.angles, scenario.gains, cfg.K_rician, cfg.lambda),
        powers(equal_power(cfg)),
        channels(model.build(scenario.geometry.R)),
        state(initial_state(cfg, channels, scenario.geometry.R)) {}
};

}  // namespace fluidnet::testing
