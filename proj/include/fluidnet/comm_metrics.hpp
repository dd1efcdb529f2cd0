#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fluidnet/config.hpp"
#include "fluidnet/geometry_channel.hpp"
#include "fluidnet/types.hpp"

namespace fluidnet {

/// The four decision blocks. Column u*A + a of W is the receive beamformer
/// for antenna a of user u.
struct NetworkState {
  std::vector<double> f_s;
  std::vector<int> q;
  CMatrix W;
  std::vector<Point> R;
};

/// Per-antenna transmit powers; p[u](a) in watts.
struct PowerAllocation {
  std::vector<RVector> p;
};

/// Equal split of P_user over each user's A antennas.
PowerAllocation equal_power(const SystemConfig& config);

struct LossBreakdown {
  std::vector<double> T_fo;
  std::vector<double> T_si;
  std::vector<double> PSNR;
  std::vector<double> R_ul;
  double loss = 0.0;
  bool feasible = true;  // false when some rate was not positive

  double total_latency() const;
  double total_psnr() const;
};

/// Z_u = sigma2 W_u^H W_u + sum_{k != u} W_u^H H_k P_k H_k^H W_u.
CMatrix interference_covariance(int u, const CMatrix& W,
                                const ChannelRealization& channels,
                                const PowerAllocation& powers, double sigma2);

/// log2 det(I + Z^{-1/2} S S^H Z^{-H/2}) with S = W_u^H H_u P_u^{1/2}.
/// Throws Error(Numerical) when Z is not positive definite.
double uplink_rate(int u, const CMatrix& W, const ChannelRealization& channels,
                   const PowerAllocation& powers, double sigma2);

/// q D / (b rate); returns kLatencySentinel when rate <= 0.
double offload_latency(double q, double D, double b, double rate);

double inference_latency(double c_s, double d, double f);

/// 10 log10(sigma_xmax^2 / (Delta^2/12)) with Delta = (x_max-x_min)/(2^q-1).
double psnr(double q, double x_min, double x_max, double sigma_xmax);

LossBreakdown total_loss(const NetworkState& state,
                         const ChannelRealization& channels,
                         const PowerAllocation& powers,
                         const SystemConfig& config);

/// Checks constraints on f_s, q, W and R. Throws Error(InvalidInput).
void check_state_feasible(const NetworkState& state, const SystemConfig& config);

void write_loss_csv_header(std::ostream& out, int U);
void write_loss_csv_row(std::ostream& out, std::uint64_t seed, int iteration,
                        const LossBreakdown& loss);

}  // namespace fluidnet
