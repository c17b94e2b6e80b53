#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "rydtweezer/config.hpp"
#include "rydtweezer/hilbert.hpp"

namespace rydtweezer::testing {

// Fresh scratch directory under $RYDTWEEZER_TEST_TMP (or the system temp dir).
inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("RYDTWEEZER_TEST_TMP");
  const std::filesystem::path base = env ? std::filesystem::path(env) : std::filesystem::temp_directory_path() / "rydtweezer-tests";
  const auto dir = base / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline StateVector random_state(int n_atoms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector psi(n_atoms);
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = {g(rng), g(rng)};
  const double nrm = norm(psi);
  for (auto& a : psi.amplitudes()) a /= nrm;
  return psi;
}

// Small chain used across suites: unequal traps, both Lamb-Dicke parameters
// nonzero, spacing close enough that the interaction is not negligible.
inline SystemConfig coupled_config(int n_atoms, Boundary boundary = Boundary::Open) {
  SystemConfig c;
  c.n_atoms = n_atoms;
  c.boundary = boundary;
  c.spacing_over_Rb = 1.2;
  c.omega_trap_R = angular_from_khz(12.5);
  c.eta_override = LambDickePair{0.1, 0.09};
  c.t_final_over_T = 20.0;
  c.steady_window = {10.0, 20.0};
  return c;
}

inline SystemConfig decoupled_config(int n_atoms) {
  SystemConfig c;
  c.n_atoms = n_atoms;
  c.eta_override = LambDickePair{0.0, 0.0};
  return c;
}

}  // namespace rydtweezer::testing
