#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "fluidnet/config.hpp"
#include "fluidnet/types.hpp"

namespace fluidnet {

/// Elevation/azimuth pair in radians.
struct AnglePair {
  double theta = 0.0;
  double phi = 0.0;
};

struct AntennaGeometry {
  std::vector<Point> R;               // M BS fluid antennas
  std::vector<std::vector<Point>> T;  // U users x A fixed antennas

  int num_bs() const { return static_cast<int>(R.size()); }
  int num_users() const { return static_cast<int>(T.size()); }
};

/// Angles for the LoS path of every user and for each scatterer.
/// Scatterer angles are shared across users.
struct AngleSet {
  std::vector<AnglePair> user_arrival;
  std::vector<AnglePair> user_departure;
  std::vector<AnglePair> scatter_arrival;
  std::vector<AnglePair> scatter_departure;
};

struct PathGains {
  std::vector<cd> beta;   // per user LoS
  std::vector<cd> gamma;  // per scatterer NLoS
};

struct ChannelRealization {
  std::vector<CMatrix> H;  // U matrices of size M x A

  int num_users() const { return static_cast<int>(H.size()); }
};

/// Entry m is exp(j 2pi/lambda (x_m sin(theta) cos(phi) + y_m cos(theta))).
CVector array_response_bs(std::span<const Point> R, double theta, double phi,
                          double lambda);

/// Same phase law evaluated on one user's fixed antennas.
CVector steering_user(std::span<const Point> T_u, double theta, double phi,
                      double lambda);

/// Phase of a single element, mirrors array_response_bs for one antenna.
cd array_element(const Point& r, const AnglePair& angle, double lambda);

ChannelRealization build_channel(const AntennaGeometry& geometry,
                                 const AngleSet& angles, const PathGains& gains,
                                 double K_rician, double lambda);

/// Per-user row coefficients that let callers rebuild row m of every H_u after
/// moving antenna m, without touching the other rows.
class ChannelModel {
public:
  ChannelModel(const AntennaGeometry& geometry, const AngleSet& angles,
               const PathGains& gains, double K_rician, double lambda);

  /// Row m of H_u for a BS antenna at `r` (length A, as a row vector).
  Eigen::RowVectorXcd row(int u, const Point& r) const;

  ChannelRealization build(std::span<const Point> R) const;

  int num_users() const { return static_cast<int>(los_row_.size()); }
  int antennas_per_user() const { return antennas_; }

private:
  double lambda_;
  int antennas_ = 0;
  std::vector<AnglePair> user_arrival_;
  std::vector<AnglePair> scatter_arrival_;
  // los_row_[u] = sqrt(K/(K+1)) beta_u g_u^H
  std::vector<Eigen::RowVectorXcd> los_row_;
  // nlos_row_[u][n] = sqrt(1/(K+1)) / sqrt(N) gamma_n g_{n,u}^H
  std::vector<std::vector<Eigen::RowVectorXcd>> nlos_row_;
};

struct Scenario {
  AngleSet angles;
  PathGains gains;
  AntennaGeometry geometry;
};

/// M points equally spaced on the panel diagonal, endpoints included.
/// Throws Error(Configuration) when the spacing falls below D_min.
std::vector<Point> fpa_baseline_geometry(int M, double L, double D_min);

/// Diagonal placement when feasible, otherwise seeded rejection sampling.
std::vector<Point> initial_fa_positions(int M, double L, double D_min,
                                        std::uint64_t seed);

/// User u's antennas at (a lambda/2, 0), a = 0..A-1.
std::vector<std::vector<Point>> user_fpa_layout(int U, int A, double lambda);

Scenario sample_scenario(const SystemConfig& config, std::uint64_t seed);

bool positions_feasible(std::span<const Point> R, double L, double D_min);

void write_scenario_json(std::ostream& out, const Scenario& scenario);
Scenario read_scenario_json(std::istream& in);

}  // namespace fluidnet
