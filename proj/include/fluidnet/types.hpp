#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fluidnet {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Planar position in meters.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class ErrorCode {
  InvalidInput = 1,
  Configuration = 2,
  Numerical = 3,
  Io = 4,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

// Offloading latency reported when the uplink rate is not positive.
inline constexpr double kLatencySentinel = 1.0e12;

inline constexpr int kDigitSet[4] = {4, 8, 16, 32};

inline bool is_feasible_digit(int q) {
  return q == 4 || q == 8 || q == 16 || q == 32;
}

}  // namespace fluidnet
