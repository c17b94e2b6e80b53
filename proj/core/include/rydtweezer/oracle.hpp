#pragma once

#include "rydtweezer/config.hpp"
#include "rydtweezer/dense.hpp"
#include "rydtweezer/observables.hpp"

// Reference implementations used to cross-check the matrix-free code. They
// are written from the model definition directly (Kronecker products, direct
// quadrature) and share no code with the term builders.
namespace rydtweezer::oracle {

/// 2x2 matrix of a qubit operator in the (|0>, |1>) basis.
Eigen::Matrix2cd pauli(PauliOp op);

/// op on one bit of an n-atom register, identity elsewhere.
DenseMatrix embed(int n_atoms, const SiteOperator& op);

/// H at drive strength omega, assembled from Kronecker products.
DenseMatrix dense_hamiltonian(const SystemConfig& config, const DerivedParams& derived, double omega);

/// <psi|O|psi>.
Complex expectation(const StateVector& psi, const DenseMatrix& op);

/// Site-averaged observables through dense operators.
ObservableSample dense_measure(const StateVector& psi);

struct FranckCondonElements {
  Complex c00;  // <R,0| e^{ikx} |g,0>
  Complex c10;  // <R,1| e^{ikx} |g,0>
  Complex c01;  // <R,0| e^{ikx} |g,1>
  Complex c11;  // <R,1| e^{ikx} |g,1>
};

/// Overlap integrals of harmonic-oscillator eigenfunctions of lengths x0_g and
/// x0_R under e^{ikx}, by trapezoid quadrature.
FranckCondonElements franck_condon_quadrature(double x0_g, double x0_R, double k, int points = 8001);

/// <tau^z>(t) = -cos(omega_eff t) for a resonantly driven two-level atom in |g>.
double rabi_tau_z(double omega_eff, double t);

/// Omega zeta exp(-eta_gR^2 / 2).
double effective_rabi(const DerivedParams& derived, double omega);

}  // namespace rydtweezer::oracle
