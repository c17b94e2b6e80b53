#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydtweezer/units.hpp"

namespace rydtweezer {

/// Malformed or inconsistent configuration document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Boundary { Open, Periodic };
enum class Taper { None, Hann };

struct LambDickePair {
  double eta_g = 0.0;
  double eta_R = 0.0;
};

/// Fewest samples a steady window may hold for its spectrum to be computed.
inline constexpr std::size_t kMinWindowSamples = 64;

/// Half-open time interval [lo, hi) in units of the drive period T.
struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Thresholds used by the spectral phase classifier.
struct AnalysisOptions {
  Taper taper = Taper::None;
  double significance = 0.05;      // peak floor, fraction of the max-normalised spectrum
  double companion_ratio = 0.2;    // second peak below this fraction of the first -> single line
  double epsilon_m = 1e-4;         // absolute motional spectral amplitude for "silent" motion
  int max_denominator = 8;         // rational locking search depth
  double ratio_tolerance = 1e-2;   // |f2/f1 - p/q| below this counts as locked
};

struct MonitorOptions {
  double norm_drift_tolerance = 1e-6;
  double energy_drift_tolerance = 1e-6;  // relative to the Hamiltonian norm bound
};

/// Complete parameter set of one run. Every frequency is stored as an angular
/// frequency in rad/s; lengths of the chain are in micrometres; times are in
/// units of the drive period T = 2 pi / omega0.
struct SystemConfig {
  int n_atoms = 1;
  std::optional<double> spacing_R;     // um; when empty, spacing_over_Rb applies
  double spacing_over_Rb = 4.0;
  double c6 = 1.0;                     // MHz um^6
  double omega0 = angular_from_khz(10.0);
  double ramp_rate_r = angular_from_khz(1.0);
  bool ramp_enabled = true;
  double omega_trap_g = angular_from_khz(10.0);
  double omega_trap_R = angular_from_khz(10.0);
  std::optional<double> laser_wavevector_k;  // 1/m
  std::optional<LambDickePair> eta_override = LambDickePair{0.1, 0.1};
  double dt_over_T = 1e-3;
  double t_final_over_T = 200.0;
  TimeWindow steady_window{160.0, 200.0};
  Boundary boundary = Boundary::Open;
  int record_stride = 10;
  bool renormalize = false;
  PhysicalConstants constants;
  AnalysisOptions analysis;
  MonitorOptions monitors;

  /// Throws ConfigError describing the first violated invariant.
  void validate() const;
};

/// Every scalar of the model that follows from a SystemConfig.
struct DerivedParams {
  double x0_g = 0.0;  // m
  double x0_R = 0.0;  // m
  double eta_g = 0.0;
  double eta_R = 0.0;
  double eta_gR = 0.0;
  double zeta = 1.0;
  double rabi_period_T = 0.0;       // s
  double blockade_radius_Rb = 0.0;  // um
  double spacing_R = 0.0;           // um
  double v0 = 0.0;                  // rad/s
  double v1 = 0.0;
  double v2 = 0.0;
  Regime regime = Regime::Weak;
  double omega_bar = 0.0;    // (omega_g + omega_R) / 2
  double delta_omega = 0.0;  // omega_R - omega_g
  double ramp_knee_over_T = 0.0;  // Omega(t) saturates here; 0 when the ramp is off
};

DerivedParams derive(const SystemConfig& config);

/// Omega(t) for this configuration, t in seconds.
double drive_omega(const SystemConfig& config, double t_seconds);

/// Key of the JSON configuration document.
struct ConfigKey {
  std::string_view name;
  std::string_view unit;
  std::string_view description;
};

/// All accepted configuration keys. The CLI help text and the JSON reader
/// are both generated from this table.
const std::vector<ConfigKey>& config_schema();

/// JSON uses I/O units: kHz for frequencies (2 pi applied on load),
/// MHz um^6 for C6, um for lengths, 1/m for k, units of T for times.
SystemConfig config_from_json(const nlohmann::json& doc);
SystemConfig load_config(const std::string& path);
nlohmann::json to_json(const SystemConfig& config);
nlohmann::json to_json(const DerivedParams& derived);

/// Applies one "key=value" override on top of a JSON document. The value is
/// parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

std::string_view to_string(Boundary boundary);
std::string_view to_string(Taper taper);

}  // namespace rydtweezer
