#pragma once

#include <span>
#include <vector>

namespace fluidnet {

/// KKT-optimal split of the server budget: f_u proportional to sqrt(c_s d_u).
/// The result is rescaled so it sums to f_ser exactly.
std::vector<double> allocate_frequencies(double c_s, std::span<const double> d_model,
                                         double f_ser);

/// sum_u c_s d_u / f_u
double inference_objective(double c_s, std::span<const double> d_model,
                           std::span<const double> f_s);

}  // namespace fluidnet
