#pragma once

#include <string>

#include <Eigen/Dense>

#include "rydtweezer/hamiltonian.hpp"

namespace rydtweezer {

using DenseMatrix = Eigen::MatrixXcd;

/// Largest chain for which a dense 4^n x 4^n matrix is built.
inline constexpr int kDenseMaxAtoms = 4;
inline constexpr int kExactPropagateMaxAtoms = 3;

/// Explicit H at drive omega built from the term list, column by column.
DenseMatrix to_dense(const HamiltonianTerms& terms, double omega);

/// Same, with Omega(t) from the configured ramp.
DenseMatrix to_dense(const Hamiltonian& hamiltonian, double t_seconds);

/// exp(-i H dt) psi through an eigendecomposition of the Hermitian H.
StateVector exact_propagate(const StateVector& psi, const DenseMatrix& hamiltonian, double dt);

/// Writes the nonzero entries as CSV rows "row,col,re,im".
void write_dense_csv(const std::string& path, const DenseMatrix& h);

}  // namespace rydtweezer
