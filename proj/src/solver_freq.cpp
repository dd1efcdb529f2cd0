#include "fluidnet/solver_freq.hpp"

#include <cmath>

#include "fluidnet/types.hpp"

namespace fluidnet {

std::vector<double> allocate_frequencies(double c_s, std::span<const double> d_model,
                                         double f_ser) {
  require(!d_model.empty(), ErrorCode::InvalidInput, "no users to allocate");
  require(c_s > 0 && f_ser > 0, ErrorCode::InvalidInput, "c_s and f_ser must be positive");
  std::vector<double> weight;
  weight.reserve(d_model.size());
  double total = 0.0;
  for (double d : d_model) {
    require(d > 0 && std::isfinite(d), ErrorCode::InvalidInput,
            "model sizes must be positive and finite");
    weight.push_back(std::sqrt(c_s * d));
    total += weight.back();
  }
  std::vector<double> f;
  f.reserve(weight.size());
  double sum = 0.0;
  for (double w : weight) {
    f.push_back(w * f_ser / total);
    sum += f.back();
  }
  // Remove rounding drift so the budget holds with equality.
  const double scale = f_ser / sum;
  for (double& x : f) x *= scale;
  return f;
}

double inference_objective(double c_s, std::span<const double> d_model,
                           std::span<const double> f_s) {
  require(d_model.size() == f_s.size(), ErrorCode::InvalidInput, "size mismatch");
  double total = 0.0;
  for (std::size_t u = 0; u < f_s.size(); ++u) total += c_s * d_model[u] / f_s[u];
  return total;
}

}  // namespace fluidnet
