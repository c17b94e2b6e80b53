#include "rydtweezer/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace rydtweezer::oracle {

namespace {

using Index = Eigen::Index;

// |to><from| as a 2x2 matrix.
Eigen::Matrix2cd ket_bra(int to, int from) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(to, from) = 1.0;
  return m;
}

DenseMatrix bit_operator(int n_atoms, unsigned bit, const Eigen::Matrix2cd& m) {
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  // Kronecker order: the most significant bit is the leftmost factor.
  for (int b = 2 * n_atoms - 1; b >= 0; --b) {
    const DenseMatrix factor = static_cast<unsigned>(b) == bit ? DenseMatrix(m) : DenseMatrix::Identity(2, 2);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

}  // namespace

Eigen::Matrix2cd pauli(PauliOp op) {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (op) {
    case PauliOp::X: m << 0, 1, 1, 0; break;
    case PauliOp::Y: m << 0, i, -i, 0; break;
    case PauliOp::Z: m << -1, 0, 0, 1; break;
    case PauliOp::Raise: m = ket_bra(1, 0); break;
    case PauliOp::Lower: m = ket_bra(0, 1); break;
    case PauliOp::Proj0: m = ket_bra(0, 0); break;
    case PauliOp::Proj1: m = ket_bra(1, 1); break;
  }
  return m;
}

DenseMatrix embed(int n_atoms, const SiteOperator& op) {
  if (n_atoms < 1 || n_atoms > kDenseMaxAtoms) throw std::invalid_argument("oracle limited to small chains");
  if (op.atom < 0 || op.atom >= n_atoms) throw std::out_of_range("atom index");
  return bit_operator(n_atoms, bit_position(op.atom, op.subsystem), pauli(op.op));
}

DenseMatrix dense_hamiltonian(const SystemConfig& config, const DerivedParams& d, double omega) {
  const int n = config.n_atoms;
  const auto dim = static_cast<Index>(dimension(n));
  DenseMatrix h = DenseMatrix::Zero(dim, dim);
  const Complex i(0.0, 1.0);
  const double env = std::exp(-0.5 * d.eta_gR * d.eta_gR);
  const double z3 = d.zeta * d.zeta * d.zeta;
  // <R,m'|...|g,m> indexed [m'][m]
  const Complex fc[2][2] = {{d.zeta * env, i * d.eta_R * z3 * env}, {i * d.eta_g * z3 * env, (1.0 - d.eta_gR * d.eta_gR) * z3 * env}};

  for (int j = 0; j < n; ++j) {
    const DenseMatrix up = embed(n, {j, Subsystem::Internal, PauliOp::Raise});
    DenseMatrix drive = DenseMatrix::Zero(dim, dim);
    for (int mp = 0; mp < 2; ++mp)
      for (int m = 0; m < 2; ++m) {
        const DenseMatrix motion = bit_operator(n, bit_position(j, Subsystem::Motional), ket_bra(mp, m));
        drive += fc[mp][m] * up * motion;
      }
    h += 0.5 * omega * (drive + drive.adjoint());
    const DenseMatrix phonon = embed(n, {j, Subsystem::Motional, PauliOp::Proj1});
    h += config.omega_trap_g * embed(n, {j, Subsystem::Internal, PauliOp::Proj0}) * phonon;
    h += config.omega_trap_R * embed(n, {j, Subsystem::Internal, PauliOp::Proj1}) * phonon;
  }

  std::vector<std::pair<int, int>> bonds;
  for (int j = 0; j + 1 < n; ++j) bonds.emplace_back(j, j + 1);
  if (config.boundary == Boundary::Periodic && n > 2) bonds.emplace_back(n - 1, 0);
  for (const auto& [a, b] : bonds) {
    const DenseMatrix rr = embed(n, {a, Subsystem::Internal, PauliOp::Proj1}) * embed(n, {b, Subsystem::Internal, PauliOp::Proj1});
    const DenseMatrix xa = embed(n, {a, Subsystem::Motional, PauliOp::X});
    const DenseMatrix xb = embed(n, {b, Subsystem::Motional, PauliOp::X});
    const DenseMatrix hop = embed(n, {a, Subsystem::Motional, PauliOp::Raise}) * embed(n, {b, Subsystem::Motional, PauliOp::Lower});
    const DenseMatrix motion = d.v0 * DenseMatrix::Identity(dim, dim) + d.v1 * (xa - xb) + 0.5 * d.v2 * (hop + hop.adjoint());
    h += rr * motion;
  }
  return h;
}

Complex expectation(const StateVector& psi, const DenseMatrix& op) {
  const auto dim = static_cast<Index>(psi.size());
  if (op.rows() != dim || op.cols() != dim) throw std::invalid_argument("operator and state dimensions differ");
  Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), dim);
  return v.dot(op * v);
}

ObservableSample dense_measure(const StateVector& psi) {
  const int n = psi.n_atoms();
  ObservableSample s;
  for (int j = 0; j < n; ++j) {
    s.tau_z_total += expectation(psi, embed(n, {j, Subsystem::Internal, PauliOp::Z})).real() / n;
    s.sigma_z_total += expectation(psi, embed(n, {j, Subsystem::Motional, PauliOp::Z})).real() / n;
    s.sigma_x_total += expectation(psi, embed(n, {j, Subsystem::Motional, PauliOp::X})).real() / n;
    s.sigma_y_total += expectation(psi, embed(n, {j, Subsystem::Motional, PauliOp::Y})).real() / n;
  }
  return s;
}

FranckCondonElements franck_condon_quadrature(double x0_g, double x0_R, double k, int points) {
  if (!(x0_g > 0.0) || !(x0_R > 0.0) || points < 3) throw std::invalid_argument("bad quadrature arguments");
  const double half_width = 14.0 * std::max(x0_g, x0_R);
  const double dx = 2.0 * half_width / (points - 1);
  const auto psi = [](int m, double x, double x0) {
    const double u = x / x0;
    const double ground = std::exp(-0.5 * u * u) / std::sqrt(x0 * std::sqrt(std::numbers::pi));
    return m == 0 ? ground : std::numbers::sqrt2 * u * ground;
  };
  Complex sum[2][2] = {};
  for (int p = 0; p < points; ++p) {
    const double x = -half_width + p * dx;
    const double w = (p == 0 || p == points - 1) ? 0.5 : 1.0;
    const Complex kick = std::polar(1.0, k * x);
    for (int mp = 0; mp < 2; ++mp)
      for (int m = 0; m < 2; ++m) sum[mp][m] += w * psi(mp, x, x0_R) * psi(m, x, x0_g) * kick;
  }
  return {sum[0][0] * dx, sum[1][0] * dx, sum[0][1] * dx, sum[1][1] * dx};
}

double rabi_tau_z(double omega_eff, double t) { return -std::cos(omega_eff * t); }

double effective_rabi(const DerivedParams& d, double omega) {
  return omega * d.zeta * std::exp(-0.5 * d.eta_gR * d.eta_gR);
}

}  // namespace rydtweezer::oracle
