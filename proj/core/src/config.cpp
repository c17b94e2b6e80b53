#include "rydtweezer/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rydtweezer {

namespace {

using nlohmann::json;

constexpr double kGridEps = 1e-9;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw ConfigError("boundary must be \"open\" or \"periodic\", got \"" + s + "\"");
}

Taper parse_taper(const std::string& s) {
  if (s == "none") return Taper::None;
  if (s == "hann") return Taper::Hann;
  throw ConfigError("taper must be \"none\" or \"hann\", got \"" + s + "\"");
}

template <typename T>
T get_as(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

std::string_view to_string(Boundary boundary) {
  return boundary == Boundary::Open ? "open" : "periodic";
}

std::string_view to_string(Taper taper) { return taper == Taper::None ? "none" : "hann"; }

void SystemConfig::validate() const {
  if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
  if (n_atoms > 15) throw ConfigError("n_atoms > 15 exceeds the supported state-vector size");
  if (spacing_R && !positive_finite(*spacing_R)) throw ConfigError("spacing_R must be > 0");
  if (!spacing_R && !positive_finite(spacing_over_Rb)) throw ConfigError("spacing_over_Rb must be > 0");
  if (!positive_finite(c6)) throw ConfigError("c6 must be > 0");
  if (!positive_finite(omega0)) throw ConfigError("omega0 must be > 0");
  if (ramp_enabled && !positive_finite(ramp_rate_r)) throw ConfigError("ramp_rate_r must be > 0");
  if (!positive_finite(omega_trap_g) || !positive_finite(omega_trap_R))
    throw ConfigError("trap frequencies must be > 0");
  if (laser_wavevector_k.has_value() == eta_override.has_value())
    throw ConfigError("exactly one of laser_wavevector_k or the (eta_g, eta_R) pair must be set");
  if (laser_wavevector_k && !(*laser_wavevector_k >= 0.0))
    throw ConfigError("laser_wavevector_k must be >= 0");
  if (eta_override && (!(eta_override->eta_g >= 0.0) || !(eta_override->eta_R >= 0.0)))
    throw ConfigError("eta_g and eta_R must be >= 0");
  if (!positive_finite(dt_over_T)) throw ConfigError("dt_over_T must be > 0");
  if (!(t_final_over_T >= dt_over_T)) throw ConfigError("t_final_over_T must be >= dt_over_T");
  if (!(steady_window.lo >= 0.0) || !(steady_window.hi > steady_window.lo) ||
      steady_window.hi > t_final_over_T * (1.0 + kGridEps))
    throw ConfigError("steady_window must satisfy 0 <= lo < hi <= t_final_over_T");
  if (record_stride < 1) throw ConfigError("record_stride must be >= 1");
  const double samples = std::floor(steady_window.length() / (dt_over_T * record_stride) + kGridEps);
  if (samples < static_cast<double>(kMinWindowSamples))
    throw ConfigError("steady_window holds about " + std::to_string(static_cast<long>(samples)) +
                      " samples; spectra need at least " + std::to_string(kMinWindowSamples));
  try {
    constants.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (!(analysis.significance > 0.0 && analysis.significance < 1.0))
    throw ConfigError("significance must lie in (0, 1)");
  if (!(analysis.companion_ratio > 0.0 && analysis.companion_ratio <= 1.0))
    throw ConfigError("companion_ratio must lie in (0, 1]");
  if (!(analysis.epsilon_m >= 0.0)) throw ConfigError("epsilon_m must be >= 0");
  if (analysis.max_denominator < 1) throw ConfigError("max_denominator must be >= 1");
  if (!(analysis.ratio_tolerance > 0.0)) throw ConfigError("ratio_tolerance must be > 0");
  if (!(monitors.norm_drift_tolerance > 0.0) || !(monitors.energy_drift_tolerance > 0.0))
    throw ConfigError("monitor tolerances must be > 0");
}

DerivedParams derive(const SystemConfig& config) {
  config.validate();
  DerivedParams d;
  d.x0_g = oscillator_length(config.constants, config.omega_trap_g);
  d.x0_R = oscillator_length(config.constants, config.omega_trap_R);
  if (config.laser_wavevector_k) {
    const double k = *config.laser_wavevector_k;
    d.eta_g = lamb_dicke(k, d.x0_g);
    d.eta_R = lamb_dicke(k, d.x0_R);
    const FranckCondon fc = franck_condon(d.x0_g, d.x0_R, k);
    d.zeta = fc.zeta;
    d.eta_gR = fc.eta_gR;
  } else {
    d.eta_g = config.eta_override->eta_g;
    d.eta_R = config.eta_override->eta_R;
    const FranckCondon fc = franck_condon_from_eta(d.x0_g, d.x0_R, d.eta_g, d.eta_R);
    d.zeta = fc.zeta;
    d.eta_gR = fc.eta_gR;
  }
  d.rabi_period_T = kTwoPi / config.omega0;
  const double c6 = c6_angular(config.c6);
  d.blockade_radius_Rb = blockade_radius(c6, config.omega0);
  d.spacing_R = config.spacing_R ? *config.spacing_R : config.spacing_over_Rb * d.blockade_radius_Rb;
  d.regime = classify_regime(d.spacing_R, d.blockade_radius_Rb);
  // Both partners of an interacting pair are in |R>, so the Rydberg trap sets
  // the oscillator length of the vdW expansion.
  const VdwCoefficients vdw = vdw_coefficients(c6, d.spacing_R, d.x0_R * 1e6);
  d.v0 = vdw.v0;
  d.v1 = vdw.v1;
  d.v2 = vdw.v2;
  d.omega_bar = 0.5 * (config.omega_trap_g + config.omega_trap_R);
  d.delta_omega = config.omega_trap_R - config.omega_trap_g;
  d.ramp_knee_over_T = config.ramp_enabled ? config.omega0 / config.ramp_rate_r : 0.0;
  return d;
}

double drive_omega(const SystemConfig& config, double t_seconds) {
  if (!config.ramp_enabled) return config.omega0;
  return ramp_omega(t_seconds, config.ramp_rate_r, config.omega0, kTwoPi / config.omega0);
}

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = {
      {"n_atoms", "count", "number of atoms in the chain (Hilbert dimension 4^n_atoms)"},
      {"spacing_R", "um", "trap spacing; overrides spacing_over_Rb when given"},
      {"spacing_over_Rb", "1", "trap spacing in units of the blockade radius (default 4)"},
      {"c6", "MHz um^6", "van der Waals coefficient; 2 pi applied internally"},
      {"omega0", "kHz", "peak Rabi frequency Omega0 / 2 pi"},
      {"ramp_rate_r", "kHz", "ramp rate r / 2 pi; Omega(t) = min(r t / T, Omega0)"},
      {"ramp", "bool", "linear drive ramp on (true) or constant Omega0 from t = 0 (false)"},
      {"omega_trap_g", "kHz", "ground-state trap frequency / 2 pi"},
      {"omega_trap_R", "kHz", "Rydberg-state trap frequency / 2 pi"},
      {"laser_wavevector_k", "1/m", "laser wavevector; Lamb-Dicke parameters follow from it"},
      {"eta_reference", "1", "Lamb-Dicke value that fixes k at eta_reference_omega_trap"},
      {"eta_reference_omega_trap", "kHz", "trap frequency at which eta_reference holds (default omega_trap_g)"},
      {"eta_g", "1", "explicit ground-state Lamb-Dicke parameter (pairs with eta_R)"},
      {"eta_R", "1", "explicit Rydberg-state Lamb-Dicke parameter (pairs with eta_g)"},
      {"dt_over_T", "T", "RK4 step"},
      {"t_final_over_T", "T", "integration horizon"},
      {"steady_window", "T", "[lo, hi) window for spectra and classification"},
      {"boundary", "open|periodic", "chain boundary condition"},
      {"record_stride", "steps", "RK4 steps between recorded samples"},
      {"renormalize", "bool", "rescale the state to unit norm at every recorded sample"},
      {"atomic_mass_u", "u", "atomic mass (default 171)"},
      {"hbar", "J s", "reduced Planck constant"},
      {"taper", "none|hann", "window applied before the DFT"},
      {"significance", "1", "spectral peak floor relative to the largest peak"},
      {"companion_ratio", "1", "second-peak fraction below which a spectrum counts as single-line"},
      {"epsilon_m", "1", "absolute motional spectral amplitude treated as silent motion"},
      {"max_denominator", "count", "largest q tried when testing f2/f1 = p/q"},
      {"ratio_tolerance", "1", "tolerance of the rational locking test"},
      {"norm_drift_tolerance", "1", "|norm - 1| above which the run is flagged"},
      {"energy_drift_tolerance", "1", "post-ramp relative energy drift above which the run is flagged"},
  };
  return keys;
}

SystemConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  std::set<std::string_view> known;
  for (const auto& key : config_schema()) known.insert(key.name);
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  SystemConfig c;
  if (doc.contains("n_atoms")) c.n_atoms = get_as<int>(doc, "n_atoms");
  if (doc.contains("spacing_R")) c.spacing_R = get_as<double>(doc, "spacing_R");
  if (doc.contains("spacing_over_Rb")) {
    if (c.spacing_R) throw ConfigError("give only one of spacing_R and spacing_over_Rb");
    c.spacing_over_Rb = get_as<double>(doc, "spacing_over_Rb");
  }
  if (doc.contains("c6")) c.c6 = get_as<double>(doc, "c6");
  if (doc.contains("omega0")) c.omega0 = angular_from_khz(get_as<double>(doc, "omega0"));
  if (doc.contains("ramp_rate_r")) c.ramp_rate_r = angular_from_khz(get_as<double>(doc, "ramp_rate_r"));
  if (doc.contains("ramp")) c.ramp_enabled = get_as<bool>(doc, "ramp");
  if (doc.contains("omega_trap_g")) c.omega_trap_g = angular_from_khz(get_as<double>(doc, "omega_trap_g"));
  if (doc.contains("omega_trap_R")) c.omega_trap_R = angular_from_khz(get_as<double>(doc, "omega_trap_R"));
  if (doc.contains("atomic_mass_u")) c.constants.atomic_mass = get_as<double>(doc, "atomic_mass_u") * kAtomicMassUnit;
  if (doc.contains("hbar")) c.constants.hbar = get_as<double>(doc, "hbar");

  const bool has_k = doc.contains("laser_wavevector_k");
  const bool has_ref = doc.contains("eta_reference");
  const bool has_pair = doc.contains("eta_g") || doc.contains("eta_R");
  if (int(has_k) + int(has_ref) + int(has_pair) > 1)
    throw ConfigError("give exactly one of laser_wavevector_k, eta_reference, or (eta_g, eta_R)");
  if (doc.contains("eta_reference_omega_trap") && !has_ref)
    throw ConfigError("eta_reference_omega_trap requires eta_reference");
  if (has_k) {
    c.eta_override.reset();
    c.laser_wavevector_k = get_as<double>(doc, "laser_wavevector_k");
  } else if (has_ref) {
    const double eta = get_as<double>(doc, "eta_reference");
    const double omega = doc.contains("eta_reference_omega_trap")
                             ? angular_from_khz(get_as<double>(doc, "eta_reference_omega_trap"))
                             : c.omega_trap_g;
    if (!(eta >= 0.0)) throw ConfigError("eta_reference must be >= 0");
    try {
      c.laser_wavevector_k = eta * std::numbers::sqrt2 / oscillator_length(c.constants, omega);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
    c.eta_override.reset();
  } else if (has_pair) {
    if (!doc.contains("eta_g") || !doc.contains("eta_R"))
      throw ConfigError("eta_g and eta_R must be given together");
    c.eta_override = LambDickePair{get_as<double>(doc, "eta_g"), get_as<double>(doc, "eta_R")};
  }

  if (doc.contains("dt_over_T")) c.dt_over_T = get_as<double>(doc, "dt_over_T");
  if (doc.contains("t_final_over_T")) c.t_final_over_T = get_as<double>(doc, "t_final_over_T");
  if (doc.contains("steady_window")) {
    const auto w = get_as<std::vector<double>>(doc, "steady_window");
    if (w.size() != 2) throw ConfigError("steady_window must be [lo, hi]");
    c.steady_window = {w[0], w[1]};
  }
  if (doc.contains("boundary")) c.boundary = parse_boundary(get_as<std::string>(doc, "boundary"));
  if (doc.contains("record_stride")) c.record_stride = get_as<int>(doc, "record_stride");
  if (doc.contains("renormalize")) c.renormalize = get_as<bool>(doc, "renormalize");
  if (doc.contains("taper")) c.analysis.taper = parse_taper(get_as<std::string>(doc, "taper"));
  if (doc.contains("significance")) c.analysis.significance = get_as<double>(doc, "significance");
  if (doc.contains("companion_ratio")) c.analysis.companion_ratio = get_as<double>(doc, "companion_ratio");
  if (doc.contains("epsilon_m")) c.analysis.epsilon_m = get_as<double>(doc, "epsilon_m");
  if (doc.contains("max_denominator")) c.analysis.max_denominator = get_as<int>(doc, "max_denominator");
  if (doc.contains("ratio_tolerance")) c.analysis.ratio_tolerance = get_as<double>(doc, "ratio_tolerance");
  if (doc.contains("norm_drift_tolerance"))
    c.monitors.norm_drift_tolerance = get_as<double>(doc, "norm_drift_tolerance");
  if (doc.contains("energy_drift_tolerance"))
    c.monitors.energy_drift_tolerance = get_as<double>(doc, "energy_drift_tolerance");
  c.validate();
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("malformed config '" + path + "': " + e.what());
  }
  return config_from_json(doc);
}

json to_json(const SystemConfig& c) {
  json j;
  j["n_atoms"] = c.n_atoms;
  if (c.spacing_R)
    j["spacing_R"] = *c.spacing_R;
  else
    j["spacing_over_Rb"] = c.spacing_over_Rb;
  j["c6"] = c.c6;
  j["omega0"] = khz_from_angular(c.omega0);
  j["ramp_rate_r"] = khz_from_angular(c.ramp_rate_r);
  j["ramp"] = c.ramp_enabled;
  j["omega_trap_g"] = khz_from_angular(c.omega_trap_g);
  j["omega_trap_R"] = khz_from_angular(c.omega_trap_R);
  if (c.laser_wavevector_k) j["laser_wavevector_k"] = *c.laser_wavevector_k;
  if (c.eta_override) {
    j["eta_g"] = c.eta_override->eta_g;
    j["eta_R"] = c.eta_override->eta_R;
  }
  j["dt_over_T"] = c.dt_over_T;
  j["t_final_over_T"] = c.t_final_over_T;
  j["steady_window"] = {c.steady_window.lo, c.steady_window.hi};
  j["boundary"] = to_string(c.boundary);
  j["record_stride"] = c.record_stride;
  j["renormalize"] = c.renormalize;
  j["atomic_mass_u"] = c.constants.atomic_mass / kAtomicMassUnit;
  j["hbar"] = c.constants.hbar;
  j["taper"] = to_string(c.analysis.taper);
  j["significance"] = c.analysis.significance;
  j["companion_ratio"] = c.analysis.companion_ratio;
  j["epsilon_m"] = c.analysis.epsilon_m;
  j["max_denominator"] = c.analysis.max_denominator;
  j["ratio_tolerance"] = c.analysis.ratio_tolerance;
  j["norm_drift_tolerance"] = c.monitors.norm_drift_tolerance;
  j["energy_drift_tolerance"] = c.monitors.energy_drift_tolerance;
  return j;
}

json to_json(const DerivedParams& d) {
  return json{{"x0_g_m", d.x0_g},
              {"x0_R_m", d.x0_R},
              {"eta_g", d.eta_g},
              {"eta_R", d.eta_R},
              {"eta_gR", d.eta_gR},
              {"zeta", d.zeta},
              {"rabi_period_T_s", d.rabi_period_T},
              {"blockade_radius_um", d.blockade_radius_Rb},
              {"spacing_um", d.spacing_R},
              {"spacing_over_Rb", d.spacing_R / d.blockade_radius_Rb},
              {"v0_rad_s", d.v0},
              {"v1_rad_s", d.v1},
              {"v2_rad_s", d.v2},
              {"regime", to_string(d.regime)},
              {"omega_bar_rad_s", d.omega_bar},
              {"delta_omega_rad_s", d.delta_omega},
              {"ramp_knee_over_T", d.ramp_knee_over_T}};
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like key=value, got '" + std::string(assignment) + "'");
  const std::string key(assignment.substr(0, eq));
  const std::string value(assignment.substr(eq + 1));
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  doc[key] = parsed.is_discarded() ? json(value) : parsed;
  // Switching Lamb-Dicke source on the command line replaces the one in the file.
  auto drop = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) doc.erase(k);
  };
  if (key == "laser_wavevector_k") drop({"eta_reference", "eta_reference_omega_trap", "eta_g", "eta_R"});
  if (key == "eta_reference") drop({"laser_wavevector_k", "eta_g", "eta_R"});
  if (key == "eta_g" || key == "eta_R") drop({"laser_wavevector_k", "eta_reference", "eta_reference_omega_trap"});
  if (key == "spacing_R") drop({"spacing_over_Rb"});
  if (key == "spacing_over_Rb") drop({"spacing_R"});
}

}  // namespace rydtweezer
