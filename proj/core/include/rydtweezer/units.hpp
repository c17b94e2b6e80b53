#pragma once

#include <numbers>
#include <stdexcept>
#include <string_view>

namespace rydtweezer {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

/// Raised for physically meaningless inputs (non-positive masses, zero spacing, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PhysicalConstants {
  double hbar = 1.054571817e-34;                 // J s
  double atomic_mass = 171.0 * kAtomicMassUnit;  // kg (171Yb)

  void validate() const;
};

// Unit conversions at the I/O boundary. Internally hbar = 1 and every
// frequency is an angular frequency in rad/s.
constexpr double angular_from_khz(double f_khz) { return kTwoPi * 1e3 * f_khz; }
constexpr double khz_from_angular(double omega) { return omega / (kTwoPi * 1e3); }
// C6 given in MHz um^6, returned in rad/s um^6.
constexpr double c6_angular(double c6_mhz_um6) { return kTwoPi * 1e6 * c6_mhz_um6; }

/// Harmonic-oscillator length sqrt(hbar / (m omega)) in metres.
double oscillator_length(const PhysicalConstants& constants, double omega_trap);

/// Lamb-Dicke parameter k x0 / sqrt(2). k = 0 is the decoupled limit.
double lamb_dicke(double k, double x0);

struct FranckCondon {
  double zeta;    // Gaussian-overlap normalisation, in (0, 1]
  double eta_gR;  // effective Lamb-Dicke parameter of the g <-> R overlap
};

/// Overlap factors of two Gaussian ground states of widths x0_g, x0_R under
/// the recoil kick exp(ikx):
///   zeta^2    = 2 x0g x0R / (x0g^2 + x0R^2)
///   eta_gR^2  = k^2 x0g^2 x0R^2 / (x0g^2 + x0R^2)
FranckCondon franck_condon(double x0_g, double x0_R, double k);

/// Same as above, but with eta_gR fixed through an explicit (eta_g, eta_R)
/// pair instead of a wavevector: eta_gR^2 = 2 eta_g^2 eta_R^2 / (eta_g^2 + eta_R^2).
/// Equals franck_condon(x0_g, x0_R, k) whenever the pair is consistent with k.
FranckCondon franck_condon_from_eta(double x0_g, double x0_R, double eta_g, double eta_R);

/// (C6 / Omega0)^(1/6); both arguments in the same angular-frequency convention.
double blockade_radius(double c6, double omega0);

enum class Regime { Weak, Blockade, Strong };

Regime classify_regime(double spacing, double blockade_radius);
std::string_view to_string(Regime regime);

struct VdwCoefficients {
  double v0;  // C6 / R^6
  double v1;  // -6 C6 x0 / R^7
  double v2;  // 42 C6 x0^2 / R^8
};

/// Second-order Taylor coefficients of C6 / |R + d|^6 with d measured in units
/// of x0. Throws ParameterError for R <= 0.
VdwCoefficients vdw_coefficients(double c6, double spacing, double x0);

/// Linear ramp min(r t / T, Omega0), t >= 0.
double ramp_omega(double t, double ramp_rate, double omega0, double period);

}  // namespace rydtweezer
