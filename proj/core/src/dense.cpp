#include "rydtweezer/dense.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rydtweezer {

DenseMatrix to_dense(const HamiltonianTerms& terms, double omega) {
  if (terms.n_atoms > kDenseMaxAtoms)
    throw std::invalid_argument("dense Hamiltonian limited to n_atoms <= " + std::to_string(kDenseMaxAtoms));
  const std::size_t dim = dimension(terms.n_atoms);
  DenseMatrix h = DenseMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  StateVector unit(terms.n_atoms);
  StateVector column(terms.n_atoms);
  for (std::size_t c = 0; c < dim; ++c) {
    unit.set_zero();
    column.set_zero();
    unit[c] = 1.0;
    for (const Term& t : terms.static_part) apply_product(unit, column, t.factors, t.coeff);
    for (const Term& t : terms.rabi_part) apply_product(unit, column, t.factors, omega * t.coeff);
    for (std::size_t r = 0; r < dim; ++r)
      h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = column[r];
  }
  return h;
}

DenseMatrix to_dense(const Hamiltonian& hamiltonian, double t_seconds) {
  return to_dense(hamiltonian.terms(), hamiltonian.omega_at(t_seconds));
}

StateVector exact_propagate(const StateVector& psi, const DenseMatrix& hamiltonian, double dt) {
  if (psi.n_atoms() > kExactPropagateMaxAtoms)
    throw std::invalid_argument("exact propagation limited to n_atoms <= " +
                                std::to_string(kExactPropagateMaxAtoms));
  const auto dim = static_cast<Eigen::Index>(psi.size());
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim)
    throw std::invalid_argument("Hamiltonian and state dimensions differ");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(hamiltonian);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), dim);
  Eigen::VectorXcd coeffs = eig.eigenvectors().adjoint() * v;
  for (Eigen::Index k = 0; k < dim; ++k) coeffs[k] *= std::polar(1.0, -eig.eigenvalues()[k] * dt);
  const Eigen::VectorXcd evolved = eig.eigenvectors() * coeffs;
  StateVector out(psi.n_atoms());
  for (Eigen::Index k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)] = evolved[k];
  return out;
}

void write_dense_csv(const std::string& path, const DenseMatrix& h) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "row,col,re,im\n";
  char line[128];
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      const Complex v = h(r, c);
      if (v == Complex{}) continue;
      std::snprintf(line, sizeof line, "%td,%td,%.16e,%.16e\n", r, c, v.real(), v.imag());
      out << line;
    }
  }
}

}  // namespace rydtweezer
