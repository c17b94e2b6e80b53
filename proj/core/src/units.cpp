#include "rydtweezer/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rydtweezer {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ParameterError("hbar must be positive");
  if (!(atomic_mass > 0.0) || !std::isfinite(atomic_mass))
    throw ParameterError("atomic_mass must be positive");
}

double oscillator_length(const PhysicalConstants& constants, double omega_trap) {
  constants.validate();
  if (!(omega_trap > 0.0)) throw ParameterError("trap frequency must be positive");
  return std::sqrt(constants.hbar / (constants.atomic_mass * omega_trap));
}

double lamb_dicke(double k, double x0) {
  if (!(k >= 0.0)) throw ParameterError("laser wavevector must be non-negative");
  if (!(x0 > 0.0)) throw ParameterError("oscillator length must be positive");
  return k * x0 / std::numbers::sqrt2;
}

namespace {

double overlap_zeta(double x0_g, double x0_R) {
  if (!(x0_g > 0.0) || !(x0_R > 0.0)) throw ParameterError("oscillator lengths must be positive");
  // Written in terms of the width ratio so that tiny SI lengths do not underflow.
  const double ratio = x0_R / x0_g;
  return std::sqrt(2.0 * ratio / (1.0 + ratio * ratio));
}

}  // namespace

FranckCondon franck_condon(double x0_g, double x0_R, double k) {
  const double zeta = overlap_zeta(x0_g, x0_R);
  if (!(k >= 0.0)) throw ParameterError("laser wavevector must be non-negative");
  const double g2 = x0_g * x0_g;
  const double r2 = x0_R * x0_R;
  const double eta_gR = k * std::sqrt(g2 * r2 / (g2 + r2));
  return {zeta, eta_gR};
}

FranckCondon franck_condon_from_eta(double x0_g, double x0_R, double eta_g, double eta_R) {
  const double zeta = overlap_zeta(x0_g, x0_R);
  if (!(eta_g >= 0.0) || !(eta_R >= 0.0))
    throw ParameterError("Lamb-Dicke parameters must be non-negative");
  const double g2 = eta_g * eta_g;
  const double r2 = eta_R * eta_R;
  const double eta_gR = (g2 + r2 > 0.0) ? std::sqrt(2.0 * g2 * r2 / (g2 + r2)) : 0.0;
  return {zeta, eta_gR};
}

double blockade_radius(double c6, double omega0) {
  if (!(c6 > 0.0)) throw ParameterError("C6 must be positive");
  if (!(omega0 > 0.0)) throw ParameterError("Rabi frequency must be positive");
  return std::pow(c6 / omega0, 1.0 / 6.0);
}

Regime classify_regime(double spacing, double blockade_radius) {
  if (!(blockade_radius > 0.0)) throw ParameterError("blockade radius must be positive");
  if (std::abs(spacing - blockade_radius) <= 1e-9 * blockade_radius) return Regime::Blockade;
  return spacing > blockade_radius ? Regime::Weak : Regime::Strong;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Weak: return "Weak";
    case Regime::Blockade: return "Blockade";
    case Regime::Strong: return "Strong";
  }
  return "Unknown";
}

VdwCoefficients vdw_coefficients(double c6, double spacing, double x0) {
  if (!(spacing > 0.0)) throw ParameterError("vdW expansion is singular at zero spacing");
  const double r6 = std::pow(spacing, 6);
  const double v0 = c6 / r6;
  const double s = x0 / spacing;
  return {v0, -6.0 * v0 * s, 42.0 * v0 * s * s};
}

double ramp_omega(double t, double ramp_rate, double omega0, double period) {
  if (!(t >= 0.0)) throw ParameterError("ramp time must be non-negative");
  if (!(period > 0.0)) throw ParameterError("drive period must be positive");
  return std::min(ramp_rate * t / period, omega0);
}

}  // namespace rydtweezer
