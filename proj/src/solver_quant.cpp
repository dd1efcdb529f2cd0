#include "fluidnet/solver_quant.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fluidnet/comm_metrics.hpp"
#include "fluidnet/types.hpp"

namespace fluidnet {

double quant_discriminant(double D, double b, double rate, double alpha) {
  return D * std::numbers::ln10 - 20.0 * alpha * std::numbers::ln2 * b * rate;
}

double unconstrained_optimum(double D, double b, double rate, double alpha) {
  require(D > 0 && b > 0 && rate > 0 && alpha >= 0, ErrorCode::InvalidInput,
          "digit optimum needs D, b, rate > 0 and alpha >= 0");
  const double z = quant_discriminant(D, b, rate, alpha);
  if (z <= 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(D * std::numbers::ln10 / z);
}

int project_digits(double q) {
  if (std::isinf(q) && q > 0) return 32;
  int best = kDigitSet[0];
  double best_gap = std::abs(q - best);
  for (int d : kDigitSet) {
    const double gap = std::abs(q - d);
    if (gap < best_gap) {
      best = d;
      best_gap = gap;
    }
  }
  return best;
}

double quant_objective(double q, double D, double b, double rate,
                       const SystemConfig& config) {
  return offload_latency(q, D, b, rate) -
         config.alpha * psnr(q, config.x_min, config.x_max, config.sigma_xmax);
}

double quant_objective_derivative(double q, double D, double b, double rate,
                                  double alpha) {
  const double p = std::exp2(q);
  return D / (b * rate) -
         20.0 * alpha * p * std::numbers::ln2 / ((p - 1.0) * std::numbers::ln10);
}

QuantResult solve_quant(std::span<const int> q_current,
                        std::span<const double> rates,
                        const SystemConfig& config) {
  const SystemConfig cfg = config.normalized();
  require(q_current.size() == static_cast<std::size_t>(cfg.U) &&
              rates.size() == q_current.size(),
          ErrorCode::InvalidInput, "digit and rate vectors must have U entries");
  QuantResult r;
  for (std::size_t u = 0; u < q_current.size(); ++u) {
    const double D = cfg.D_feat[u];
    const int incumbent = q_current[u];
    require(is_feasible_digit(incumbent), ErrorCode::InvalidInput,
            "incumbent digit outside {4,8,16,32}");
    if (!(rates[u] > 0.0)) {
      // No link: latency is the sentinel for every digit, so only PSNR matters.
      r.z.push_back(-std::numeric_limits<double>::infinity());
      r.q_unconstrained.push_back(std::numeric_limits<double>::infinity());
      r.q_projected.push_back(32);
      r.q.push_back(cfg.alpha > 0 ? 32 : incumbent);
      r.q_bruteforce.push_back(r.q.back());
      continue;
    }
    const double z = quant_discriminant(D, cfg.b, rates[u], cfg.alpha);
    const double q_cont = unconstrained_optimum(D, cfg.b, rates[u], cfg.alpha);
    const int projected = project_digits(q_cont);
    const double f_new = quant_objective(projected, D, cfg.b, rates[u], cfg);
    const double f_old = quant_objective(incumbent, D, cfg.b, rates[u], cfg);
    int brute = kDigitSet[0];
    double brute_f = quant_objective(brute, D, cfg.b, rates[u], cfg);
    for (int d : kDigitSet) {
      const double f = quant_objective(d, D, cfg.b, rates[u], cfg);
      if (f < brute_f) {
        brute = d;
        brute_f = f;
      }
    }
    r.z.push_back(z);
    r.q_unconstrained.push_back(q_cont);
    r.q_projected.push_back(projected);
    r.q.push_back(f_new <= f_old ? projected : incumbent);
    r.q_bruteforce.push_back(brute);
  }
  return r;
}

}  // namespace fluidnet
