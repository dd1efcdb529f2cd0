#pragma once

#include <span>
#include <vector>

#include "fluidnet/config.hpp"

namespace fluidnet {

struct QuantResult {
  std::vector<double> q_unconstrained;  // may be +inf
  std::vector<double> z;
  std::vector<int> q_projected;         // nearest feasible digit
  std::vector<int> q;                   // after the incumbent safeguard
  std::vector<int> q_bruteforce;        // best of {4,8,16,32}, diagnostics only
};

/// z = D ln10 - 20 alpha ln2 b rate
double quant_discriminant(double D, double b, double rate, double alpha);

/// Continuous minimizer of the per-user digit objective on (0, inf):
/// log2(D ln10 / z) when z > 0, +inf otherwise.
double unconstrained_optimum(double D, double b, double rate, double alpha);

/// Nearest element of {4,8,16,32}; ties go to the smaller digit, +inf to 32.
int project_digits(double q);

/// Per-user digit objective q D/(b rate) - alpha PSNR(q).
double quant_objective(double q, double D, double b, double rate,
                       const SystemConfig& config);

/// Derivative of quant_objective with respect to q.
double quant_objective_derivative(double q, double D, double b, double rate,
                                  double alpha);

/// Projects every user's continuous optimum and keeps the incumbent digit
/// whenever the projection does not improve the per-user objective.
QuantResult solve_quant(std::span<const int> q_current,
                        std::span<const double> rates,
                        const SystemConfig& config);

}  // namespace fluidnet
