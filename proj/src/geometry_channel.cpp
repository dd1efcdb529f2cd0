#include "fluidnet/geometry_channel.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

#include <json.hpp>

namespace fluidnet {
namespace {

void check_angles(double theta, double phi, double lambda) {
  require(std::isfinite(theta) && std::isfinite(phi), ErrorCode::InvalidInput,
          "non-finite angle");
  require(lambda > 0 && std::isfinite(lambda), ErrorCode::InvalidInput,
          "wavelength must be positive");
}

CVector phase_vector(std::span<const Point> pts, double theta, double phi,
                     double lambda) {
  check_angles(theta, phi, lambda);
  const double k = 2.0 * std::numbers::pi / lambda;
  const double cx = std::sin(theta) * std::cos(phi);
  const double cy = std::cos(theta);
  CVector v(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    require(std::isfinite(pts[i].x) && std::isfinite(pts[i].y),
            ErrorCode::InvalidInput, "non-finite antenna position");
    v(static_cast<Eigen::Index>(i)) = std::polar(1.0, k * (pts[i].x * cx + pts[i].y * cy));
  }
  return v;
}

}  // namespace

CVector array_response_bs(std::span<const Point> R, double theta, double phi,
                          double lambda) {
  return phase_vector(R, theta, phi, lambda);
}

CVector steering_user(std::span<const Point> T_u, double theta, double phi,
                      double lambda) {
  return phase_vector(T_u, theta, phi, lambda);
}

cd array_element(const Point& r, const AnglePair& a, double lambda) {
  const double rho = r.x * std::sin(a.theta) * std::cos(a.phi) + r.y * std::cos(a.theta);
  return std::polar(1.0, 2.0 * std::numbers::pi / lambda * rho);
}

ChannelRealization build_channel(const AntennaGeometry& geometry,
                                 const AngleSet& angles, const PathGains& gains,
                                 double K_rician, double lambda) {
  const int U = geometry.num_users();
  const std::size_t N = angles.scatter_arrival.size();
  require(angles.scatter_departure.size() == N && gains.gamma.size() == N,
          ErrorCode::InvalidInput, "scatterer count mismatch between angles and gains");
  require(angles.user_arrival.size() == static_cast<std::size_t>(U) &&
              angles.user_departure.size() == static_cast<std::size_t>(U) &&
              gains.beta.size() == static_cast<std::size_t>(U),
          ErrorCode::InvalidInput, "user count mismatch between geometry, angles and gains");
  require(K_rician >= 0, ErrorCode::InvalidInput, "Rician factor must be non-negative");

  const double w_los = std::sqrt(K_rician / (K_rician + 1.0));
  const double w_nlos = N == 0 ? 0.0 : std::sqrt(1.0 / (K_rician + 1.0) / static_cast<double>(N));

  std::vector<CVector> f_scatter;
  f_scatter.reserve(N);
  for (const auto& a : angles.scatter_arrival) {
    f_scatter.push_back(array_response_bs(geometry.R, a.theta, a.phi, lambda));
  }

  ChannelRealization ch;
  ch.H.reserve(static_cast<std::size_t>(U));
  for (int u = 0; u < U; ++u) {
    const auto& T_u = geometry.T[static_cast<std::size_t>(u)];
    const auto& ar = angles.user_arrival[static_cast<std::size_t>(u)];
    const auto& de = angles.user_departure[static_cast<std::size_t>(u)];
    const CVector f = array_response_bs(geometry.R, ar.theta, ar.phi, lambda);
    const CVector g = steering_user(T_u, de.theta, de.phi, lambda);
    CMatrix H = (w_los * gains.beta[static_cast<std::size_t>(u)]) * f * g.adjoint();
    for (std::size_t n = 0; n < N; ++n) {
      const auto& sd = angles.scatter_departure[n];
      const CVector gn = steering_user(T_u, sd.theta, sd.phi, lambda);
      H += (w_nlos * gains.gamma[n]) * f_scatter[n] * gn.adjoint();
    }
    ch.H.push_back(std::move(H));
  }
  return ch;
}

ChannelModel::ChannelModel(const AntennaGeometry& geometry, const AngleSet& angles,
                           const PathGains& gains, double K_rician, double lambda)
    : lambda_(lambda),
      user_arrival_(angles.user_arrival),
      scatter_arrival_(angles.scatter_arrival) {
  const int U = geometry.num_users();
  const std::size_t N = angles.scatter_arrival.size();
  require(angles.scatter_departure.size() == N && gains.gamma.size() == N,
          ErrorCode::InvalidInput, "scatterer count mismatch between angles and gains");
  require(gains.beta.size() == static_cast<std::size_t>(U) &&
              angles.user_departure.size() == static_cast<std::size_t>(U),
          ErrorCode::InvalidInput, "user count mismatch between geometry, angles and gains");
  antennas_ = U > 0 ? static_cast<int>(geometry.T.front().size()) : 0;
  const double w_los = std::sqrt(K_rician / (K_rician + 1.0));
  const double w_nlos = N == 0 ? 0.0 : std::sqrt(1.0 / (K_rician + 1.0) / static_cast<double>(N));
  for (int u = 0; u < U; ++u) {
    const auto& T_u = geometry.T[static_cast<std::size_t>(u)];
    const auto& de = angles.user_departure[static_cast<std::size_t>(u)];
    los_row_.push_back((w_los * gains.beta[static_cast<std::size_t>(u)]) *
                       steering_user(T_u, de.theta, de.phi, lambda).adjoint());
    std::vector<Eigen::RowVectorXcd> rows;
    for (std::size_t n = 0; n < N; ++n) {
      const auto& sd = angles.scatter_departure[n];
      rows.push_back((w_nlos * gains.gamma[n]) *
                     steering_user(T_u, sd.theta, sd.phi, lambda).adjoint());
    }
    nlos_row_.push_back(std::move(rows));
  }
}

Eigen::RowVectorXcd ChannelModel::row(int u, const Point& r) const {
  const auto uu = static_cast<std::size_t>(u);
  Eigen::RowVectorXcd out = array_element(r, user_arrival_[uu], lambda_) * los_row_[uu];
  for (std::size_t n = 0; n < scatter_arrival_.size(); ++n) {
    out += array_element(r, scatter_arrival_[n], lambda_) * nlos_row_[uu][n];
  }
  return out;
}

ChannelRealization ChannelModel::build(std::span<const Point> R) const {
  ChannelRealization ch;
  const auto M = static_cast<Eigen::Index>(R.size());
  for (int u = 0; u < num_users(); ++u) {
    CMatrix H(M, antennas_);
    for (Eigen::Index m = 0; m < M; ++m) H.row(m) = row(u, R[static_cast<std::size_t>(m)]);
    ch.H.push_back(std::move(H));
  }
  return ch;
}

bool positions_feasible(std::span<const Point> R, double L, double D_min) {
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (!(R[i].x >= 0.0 && R[i].x <= L && R[i].y >= 0.0 && R[i].y <= L)) return false;
    for (std::size_t j = i + 1; j < R.size(); ++j) {
      if (distance(R[i], R[j]) < D_min) return false;
    }
  }
  return true;
}

std::vector<Point> fpa_baseline_geometry(int M, double L, double D_min) {
  require(M >= 1, ErrorCode::InvalidInput, "antenna count must be at least 1");
  require(L > 0, ErrorCode::InvalidInput, "panel side must be positive");
  std::vector<Point> R(static_cast<std::size_t>(M));
  if (M == 1) return R;
  const double step = L / (M - 1);
  for (int m = 0; m < M; ++m) {
    R[static_cast<std::size_t>(m)] = {m * step, m * step};
  }
  // Last point lands exactly on the far corner.
  R.back() = {L, L};
  if (!positions_feasible(R, L, D_min)) {
    fail(ErrorCode::Configuration,
         "diagonal placement of " + std::to_string(M) +
             " antennas violates the minimum spacing");
  }
  return R;
}

std::vector<Point> initial_fa_positions(int M, double L, double D_min,
                                        std::uint64_t seed) {
  try {
    return fpa_baseline_geometry(M, L, D_min);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Configuration) throw;
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> coord(0.0, L);
  constexpr int kRestarts = 200;
  constexpr int kTriesPerPoint = 2000;
  for (int restart = 0; restart < kRestarts; ++restart) {
    std::vector<Point> R;
    for (int m = 0; m < M; ++m) {
      bool placed = false;
      for (int t = 0; t < kTriesPerPoint && !placed; ++t) {
        const Point p{coord(rng), coord(rng)};
        bool ok = true;
        for (const auto& q : R) ok = ok && distance(p, q) >= D_min;
        if (ok) {
          R.push_back(p);
          placed = true;
        }
      }
      if (!placed) break;
    }
    if (static_cast<int>(R.size()) == M) return R;
  }
  fail(ErrorCode::Configuration, "no feasible placement of " + std::to_string(M) +
                                     " antennas with the given panel size and spacing");
}

std::vector<std::vector<Point>> user_fpa_layout(int U, int A, double lambda) {
  std::vector<std::vector<Point>> T(static_cast<std::size_t>(U));
  for (auto& t : T) {
    for (int a = 0; a < A; ++a) t.push_back({a * lambda / 2.0, 0.0});
  }
  return T;
}

Scenario sample_scenario(const SystemConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));

  Scenario s;
  auto draw = [&] { return AnglePair{angle(rng), angle(rng)}; };
  for (int u = 0; u < config.U; ++u) {
    s.angles.user_arrival.push_back(draw());
    s.angles.user_departure.push_back(draw());
  }
  for (int n = 0; n < config.N_scatter; ++n) {
    s.angles.scatter_arrival.push_back(draw());
    s.angles.scatter_departure.push_back(draw());
  }
  for (int u = 0; u < config.U; ++u) s.gains.beta.push_back(std::polar(1.0, phase(rng)));
  for (int n = 0; n < config.N_scatter; ++n) {
    const double re = normal(rng);
    const double im = normal(rng);
    s.gains.gamma.emplace_back(re, im);
  }
  s.geometry.T = user_fpa_layout(config.U, config.A, config.lambda);
  s.geometry.R = initial_fa_positions(config.M, config.L, config.D_min, seed);
  return s;
}

namespace {

nlohmann::json to_json(const std::vector<AnglePair>& v) {
  auto arr = nlohmann::json::array();
  for (const auto& a : v) arr.push_back({{"theta", a.theta}, {"phi", a.phi}});
  return arr;
}

nlohmann::json to_json(const std::vector<cd>& v) {
  auto arr = nlohmann::json::array();
  for (const auto& z : v) arr.push_back({z.real(), z.imag()});
  return arr;
}

nlohmann::json to_json(const std::vector<Point>& v) {
  auto arr = nlohmann::json::array();
  for (std::size_t i = 0; i < v.size(); ++i) {
    arr.push_back({{"antenna", i}, {"x", v[i].x}, {"y", v[i].y}});
  }
  return arr;
}

std::vector<AnglePair> angles_from(const nlohmann::json& j) {
  std::vector<AnglePair> out;
  for (const auto& a : j) out.push_back({a.at("theta").get<double>(), a.at("phi").get<double>()});
  return out;
}

std::vector<cd> complex_from(const nlohmann::json& j) {
  std::vector<cd> out;
  for (const auto& z : j) out.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  return out;
}

std::vector<Point> points_from(const nlohmann::json& j) {
  std::vector<Point> out;
  for (const auto& p : j) out.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
  return out;
}

}  // namespace

void write_scenario_json(std::ostream& out, const Scenario& s) {
  nlohmann::json j;
  j["angles"] = {{"user_arrival", to_json(s.angles.user_arrival)},
                 {"user_departure", to_json(s.angles.user_departure)},
                 {"scatter_arrival", to_json(s.angles.scatter_arrival)},
                 {"scatter_departure", to_json(s.angles.scatter_departure)}};
  j["gains"] = {{"beta", to_json(s.gains.beta)}, {"gamma", to_json(s.gains.gamma)}};
  auto users = nlohmann::json::array();
  for (const auto& t : s.geometry.T) users.push_back(to_json(t));
  j["geometry"] = {{"R", to_json(s.geometry.R)}, {"T", users}};
  out << j.dump(2) << '\n';
}

Scenario read_scenario_json(std::istream& in) {
  Scenario s;
  try {
    const auto j = nlohmann::json::parse(in);
    const auto& a = j.at("angles");
    s.angles.user_arrival = angles_from(a.at("user_arrival"));
    s.angles.user_departure = angles_from(a.at("user_departure"));
    s.angles.scatter_arrival = angles_from(a.at("scatter_arrival"));
    s.angles.scatter_departure = angles_from(a.at("scatter_departure"));
    s.gains.beta = complex_from(j.at("gains").at("beta"));
    s.gains.gamma = complex_from(j.at("gains").at("gamma"));
    s.geometry.R = points_from(j.at("geometry").at("R"));
    for (const auto& t : j.at("geometry").at("T")) s.geometry.T.push_back(points_from(t));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Io, std::string("malformed scenario JSON: ") + e.what());
  }
  return s;
}

}  // namespace fluidnet
