#include "fluidnet/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fluidnet/types.hpp"

namespace fluidnet {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
    fail(ErrorCode::Configuration,
         "config field '" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    fail(ErrorCode::Configuration,
         "config field '" + key + "': expected an integer, got '" + text + "'");
  }
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) {
    fail(ErrorCode::Configuration, "config field '" + key + "': empty list");
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

struct Field {
  std::function<void(SystemConfig&, const std::string&)> set;
  std::function<double(const SystemConfig&)> get;
  bool persisted = true;
};

#define FLUIDNET_INT_FIELD(name)                                                   \
  {                                                                                \
    #name, Field {                                                                 \
      [](SystemConfig& c, const std::string& v) { c.name = parse_int(#name, v); }, \
          [](const SystemConfig& c) { return static_cast<double>(c.name); }        \
    }                                                                              \
  }
#define FLUIDNET_REAL_FIELD(name)                                                     \
  {                                                                                   \
    #name, Field {                                                                    \
      [](SystemConfig& c, const std::string& v) { c.name = parse_double(#name, v); }, \
          [](const SystemConfig& c) { return c.name; }                                \
    }                                                                                 \
  }
#define FLUIDNET_LIST_FIELD(name)                                                   \
  {                                                                                 \
    #name, Field {                                                                  \
      [](SystemConfig& c, const std::string& v) { c.name = parse_list(#name, v); }, \
          [](const SystemConfig& c) { return c.name.empty() ? 0.0 : c.name.front(); } \
    }                                                                               \
  }

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      FLUIDNET_INT_FIELD(U),
      FLUIDNET_INT_FIELD(A),
      FLUIDNET_INT_FIELD(M),
      FLUIDNET_REAL_FIELD(lambda),
      FLUIDNET_REAL_FIELD(L),
      FLUIDNET_REAL_FIELD(D_min),
      FLUIDNET_REAL_FIELD(K_rician),
      FLUIDNET_INT_FIELD(N_scatter),
      FLUIDNET_REAL_FIELD(sigma2),
      FLUIDNET_REAL_FIELD(P_user),
      FLUIDNET_REAL_FIELD(b),
      FLUIDNET_LIST_FIELD(D_feat),
      FLUIDNET_LIST_FIELD(d_model),
      FLUIDNET_REAL_FIELD(c_s),
      FLUIDNET_REAL_FIELD(f_ser),
      FLUIDNET_REAL_FIELD(alpha),
      FLUIDNET_REAL_FIELD(x_min),
      FLUIDNET_REAL_FIELD(x_max),
      FLUIDNET_REAL_FIELD(sigma_xmax),
      FLUIDNET_REAL_FIELD(epsilon),
      {"snr_db",
       Field{[](SystemConfig& c, const std::string& v) {
               c.set_snr_db(parse_double("snr_db", v));
             },
             [](const SystemConfig& c) { return c.snr_db(); }, false}},
      {"L_lambda",
       Field{[](SystemConfig& c, const std::string& v) {
               c.L = parse_double("L_lambda", v) * c.lambda;
             },
             [](const SystemConfig& c) { return c.L / c.lambda; }, false}},
      {"D_min_lambda",
       Field{[](SystemConfig& c, const std::string& v) {
               c.D_min = parse_double("D_min_lambda", v) * c.lambda;
             },
             [](const SystemConfig& c) { return c.D_min / c.lambda; }, false}},
  };
  return table;
}

#undef FLUIDNET_INT_FIELD
#undef FLUIDNET_REAL_FIELD
#undef FLUIDNET_LIST_FIELD

std::vector<double> broadcast(const std::vector<double>& v, int n,
                              const char* name) {
  if (static_cast<int>(v.size()) == n) return v;
  if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), v.front());
  fail(ErrorCode::Configuration, std::string(name) + " has " +
                                     std::to_string(v.size()) +
                                     " entries, expected 1 or U=" + std::to_string(n));
}

}  // namespace

SystemConfig SystemConfig::normalized() const {
  SystemConfig c = *this;
  if (U > 0) {
    c.D_feat = broadcast(D_feat, U, "D_feat");
    c.d_model = broadcast(d_model, U, "d_model");
  }
  return c;
}

void SystemConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    require(ok, ErrorCode::Configuration, msg);
  };
  check(U >= 1 && A >= 1 && M >= 1, "U, A and M must be at least 1");
  check(U * A <= M, "U*A = " + std::to_string(U * A) +
                        " exceeds the BS antenna count M = " + std::to_string(M));
  check(N_scatter >= 0, "N_scatter must be non-negative");
  check(lambda > 0 && L > 0 && D_min > 0, "lambda, L and D_min must be positive");
  check(sigma2 > 0 && P_user > 0 && b > 0, "sigma2, P_user and b must be positive");
  check(f_ser > 0 && epsilon > 0 && c_s > 0, "f_ser, epsilon and c_s must be positive");
  check(K_rician >= 0, "K_rician must be non-negative");
  check(alpha >= 0, "alpha must be non-negative");
  check(x_max > x_min, "x_max must exceed x_min");
  check(sigma_xmax > 0, "sigma_xmax must be positive");
  const SystemConfig n = normalized();
  for (double d : n.D_feat) check(d > 0, "D_feat entries must be positive");
  for (double d : n.d_model) check(d > 0, "d_model entries must be positive");
}

double SystemConfig::snr_db() const { return 10.0 * std::log10(P_user / sigma2); }

void SystemConfig::set_snr_db(double snr) { P_user = sigma2 * std::pow(10.0, snr / 10.0); }

SystemConfig default_config() { return SystemConfig{}; }

SystemConfig antenna_sweep_config() {
  SystemConfig c;
  c.U = 2;
  c.L = 10 * c.lambda;
  return c;
}

void set_config_field(SystemConfig& cfg, const std::string& key,
                      const std::string& value) {
  const auto it = fields().find(key);
  if (it == fields().end()) {
    fail(ErrorCode::Configuration, "unknown config field '" + key + "'");
  }
  it->second.set(cfg, value);
}

double get_config_field(const SystemConfig& cfg, const std::string& key) {
  const auto it = fields().find(key);
  if (it == fields().end()) {
    fail(ErrorCode::Configuration, "unknown config field '" + key + "'");
  }
  return it->second.get(cfg);
}

SystemConfig parse_config(std::istream& in, SystemConfig base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::Configuration,
           "line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    set_config_field(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  return parse_config(in);
}

void apply_env_overrides(SystemConfig& cfg) {
  for (const auto& [name, field] : fields()) {
    std::string env = "FLUIDNET_";
    for (char ch : name) env += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (const char* v = std::getenv(env.c_str())) field.set(cfg, v);
  }
}

void write_config(std::ostream& out, const SystemConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [name, field] : fields()) {
    if (!field.persisted) continue;
    if (name == "D_feat") {
      os << name << " = " << join(cfg.D_feat) << '\n';
    } else if (name == "d_model") {
      os << name << " = " << join(cfg.d_model) << '\n';
    } else {
      os << name << " = " << field.get(cfg) << '\n';
    }
  }
  out << os.str();
}

std::vector<std::string> config_field_names() {
  std::vector<std::string> names;
  for (const auto& [name, field] : fields()) names.push_back(name);
  return names;
}

}  // namespace fluidnet
