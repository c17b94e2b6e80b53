#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rydtweezer/config.hpp"
#include "rydtweezer/hilbert.hpp"

namespace rydtweezer {

/// coeff * (product of factors). Factors act right to left.
struct Term {
  Complex coeff;
  std::vector<SiteOperator> factors;
};

/// Dimensionless Franck-Condon elements <R,m'| e^{ikx} |g,m> of one atom.
struct RabiCouplings {
  Complex carrier_0;  // <R,0|g,0> = zeta e^{-eta_gR^2/2}
  Complex blue;       // <R,1|g,0> = i eta_g zeta^3 e^{-eta_gR^2/2}
  Complex red;        // <R,0|g,1> = i eta_R zeta^3 e^{-eta_gR^2/2}
  Complex carrier_1;  // <R,1|g,1> = (1 - eta_gR^2) zeta^3 e^{-eta_gR^2/2}
};

RabiCouplings rabi_couplings(const DerivedParams& derived);

/// Drive term per unit Omega: (1/2) sum_j [couplings ... + h.c.].
std::vector<Term> build_rabi_term(const SystemConfig& config, const DerivedParams& derived);
/// omega_g |g><g| n_j + omega_R |R><R| n_j for every atom.
std::vector<Term> build_trap_term(const SystemConfig& config);
/// Nearest-neighbour vdW term expanded to second order in the trap motion.
std::vector<Term> build_interaction_term(const SystemConfig& config, const DerivedParams& derived);

/// Unique nearest-neighbour bonds (i, i+1 mod n) under the boundary condition.
std::vector<std::pair<int, int>> nearest_neighbour_bonds(int n_atoms, Boundary boundary);

struct HamiltonianTerms {
  int n_atoms = 0;
  std::vector<Term> static_part;  // trap + interaction
  std::vector<Term> rabi_part;    // multiplied by Omega(t) at application time

  std::size_t term_count() const { return static_part.size() + rabi_part.size(); }
};

HamiltonianTerms build_terms(const SystemConfig& config, const DerivedParams& derived);

/// Matrix-free H(t) = H_static + Omega(t) H_rabi, compiled from a term list.
/// Diagonal terms are folded into one precomputed diagonal; off-diagonal terms
/// become sparse local blocks on one atom or on a bond.
class Hamiltonian {
 public:
  Hamiltonian(const SystemConfig& config, const DerivedParams& derived);
  Hamiltonian(const SystemConfig& config, HamiltonianTerms terms);

  int n_atoms() const { return terms_.n_atoms; }
  std::size_t dimension() const { return diag_static_.size(); }
  const HamiltonianTerms& terms() const { return terms_; }
  const SystemConfig& config() const { return config_; }

  /// Omega(t) of the configured drive protocol, t in seconds.
  double omega_at(double t_seconds) const { return drive_omega(config_, t_seconds); }

  /// out = (H_static + omega H_rabi) in. `out` is overwritten.
  void apply(const StateVector& in, StateVector& out, double omega) const;

  /// out = -i (H_static + omega H_rabi) in, the Schroedinger right-hand side.
  void apply_rhs(std::span<const Complex> in, std::span<Complex> out, double omega) const;

  /// Gershgorin bound on the spectral radius of H at drive omega.
  double norm_bound(double omega) const;

  /// Complex multiply-adds per application; O(4^n n).
  std::size_t apply_cost() const;

 private:
  struct Entry {
    unsigned char row;
    unsigned char col;
    Complex value;
  };
  struct Block {
    int atom_lo = 0;
    int atom_hi = -1;  // -1 for single-atom blocks
    bool driven = false;
    std::vector<Entry> entries;
  };

  void compile();
  template <bool Rhs>
  void apply_impl(std::span<const Complex> in, std::span<Complex> out, double omega) const;

  SystemConfig config_;
  HamiltonianTerms terms_;
  std::vector<double> diag_static_;
  std::vector<double> diag_rabi_;
  std::vector<Block> blocks_;
};

/// (H_static + Omega(t) H_rabi) psi with Omega(t) from the ramp protocol.
StateVector apply_hamiltonian(const Hamiltonian& hamiltonian, const StateVector& psi, double t_seconds);

/// <psi|H(t)|psi>, real part (the imaginary part vanishes for Hermitian H).
double energy(const Hamiltonian& hamiltonian, const StateVector& psi, double t_seconds);

}  // namespace rydtweezer
