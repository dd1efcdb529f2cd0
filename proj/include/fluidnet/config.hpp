#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fluidnet {

/// Scenario scalars shared by every solver block.
///
/// Per-user vectors (`D_feat`, `d_model`) hold either one entry per user or a
/// single entry that is broadcast by `normalized()`.
struct SystemConfig {
  int U = 3;                  // users
  int A = 2;                  // antennas per user
  int M = 6;                  // BS fluid antennas
  double lambda = 0.05;       // carrier wavelength [m]
  double L = 5 * 0.05;        // panel side [m]
  double D_min = 0.05 / 2;    // minimum FA spacing [m]
  double K_rician = 1.0;
  int N_scatter = 5;
  double sigma2 = 1.0;        // noise power [W]
  double P_user = 10.0;       // per-user transmit power [W]
  double b = 1.0e6;           // bandwidth [Hz]
  std::vector<double> D_feat{1.0e6};   // feature payload [bits]
  std::vector<double> d_model{1.0e9};  // LM parameters
  double c_s = 1.0;           // PU cycles per parameter
  double f_ser = 1.0e10;      // server PU budget [cycles/s]
  double alpha = 0.02;        // accuracy sensitivity [s/dB]
  double x_min = 0.0;
  double x_max = 1.0;
  double sigma_xmax = 1.0;
  double epsilon = 1.0e-3;    // BCD relative-change tolerance

  /// Returns a copy with per-user vectors broadcast to length U.
  SystemConfig normalized() const;

  /// Throws Error(Configuration) on any invariant violation.
  void validate() const;

  double snr_db() const;
  void set_snr_db(double snr_db);
};

/// Paper-scale defaults with the convergence-study panel (L = 5 lambda).
SystemConfig default_config();

/// Two-user layout used for the antenna-count sweep (L = 10 lambda).
SystemConfig antenna_sweep_config();

/// Sets one field by name. Accepts the SystemConfig field names plus
/// `snr_db`, `L_lambda` and `D_min_lambda` (multiples of lambda).
void set_config_field(SystemConfig& cfg, const std::string& key,
                      const std::string& value);

/// Reads a field by name; per-user vectors report their first entry.
double get_config_field(const SystemConfig& cfg, const std::string& key);

/// Parses `key = value` lines; `#` starts a comment. Unknown keys are errors.
SystemConfig parse_config(std::istream& in, SystemConfig base = default_config());
SystemConfig load_config(const std::string& path);

/// Applies FLUIDNET_<FIELD> environment overrides, e.g. FLUIDNET_ALPHA or
/// FLUIDNET_D_MIN. Field names are upper-cased.
void apply_env_overrides(SystemConfig& cfg);

void write_config(std::ostream& out, const SystemConfig& cfg);

std::vector<std::string> config_field_names();

}  // namespace fluidnet
