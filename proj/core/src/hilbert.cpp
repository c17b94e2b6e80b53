#include "rydtweezer/hilbert.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rydtweezer {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'Y', 'D', 'T', 'W', 'Z', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

struct BitAction {
  std::size_t index;
  Complex amp;  // zero when the operator annihilates the basis state
};

inline BitAction act(PauliOp op, std::size_t index, unsigned bit) {
  const std::size_t mask = std::size_t{1} << bit;
  const bool up = (index & mask) != 0;
  switch (op) {
    case PauliOp::X: return {index ^ mask, 1.0};
    case PauliOp::Y: return {index ^ mask, up ? Complex(0.0, 1.0) : Complex(0.0, -1.0)};
    case PauliOp::Z: return {index, up ? 1.0 : -1.0};
    case PauliOp::Raise: return {index | mask, up ? 0.0 : 1.0};
    case PauliOp::Lower: return {index & ~mask, up ? 1.0 : 0.0};
    case PauliOp::Proj0: return {index, up ? 0.0 : 1.0};
    case PauliOp::Proj1: return {index, up ? 1.0 : 0.0};
  }
  return {index, 0.0};
}

void check_same_space(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("state vectors have different dimensions");
}

void check_atom(const StateVector& psi, int atom) {
  if (atom < 0 || atom >= psi.n_atoms()) throw std::out_of_range("atom index out of range");
}

}  // namespace

std::size_t dimension(int n_atoms) {
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be >= 1");
  if (2 * static_cast<std::size_t>(n_atoms) >= 8 * sizeof(std::size_t))
    throw std::overflow_error("4^n_atoms does not fit the index type");
  return std::size_t{1} << (2 * n_atoms);
}

std::size_t encode(std::span<const LocalState> sites) {
  std::size_t index = 0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    if (sites[j].rydberg) index |= std::size_t{1} << (2 * j);
    if (sites[j].excited) index |= std::size_t{1} << (2 * j + 1);
  }
  return index;
}

std::vector<LocalState> decode(std::size_t index, int n_atoms) {
  if (index >= dimension(n_atoms)) throw std::out_of_range("basis index out of range");
  std::vector<LocalState> sites(static_cast<std::size_t>(n_atoms));
  for (std::size_t j = 0; j < sites.size(); ++j) {
    sites[j].rydberg = (index >> (2 * j)) & 1u;
    sites[j].excited = (index >> (2 * j + 1)) & 1u;
  }
  return sites;
}

StateVector::StateVector(int n_atoms) : n_atoms_(n_atoms), amps_(dimension(n_atoms)) {}

void StateVector::set_zero() { std::fill(amps_.begin(), amps_.end(), Complex{}); }

StateVector initial_state(int n_atoms) {
  StateVector psi(n_atoms);
  psi[0] = 1.0;
  return psi;
}

void apply_product(const StateVector& in, StateVector& out, std::span<const SiteOperator> factors,
                   Complex coeff) {
  check_same_space(in, out);
  for (const auto& f : factors) check_atom(in, f.atom);
  const std::size_t dim = in.size();
  for (std::size_t i = 0; i < dim; ++i) {
    const Complex a = in[i];
    if (a == Complex{}) continue;
    std::size_t idx = i;
    Complex amp = coeff;
    // Rightmost factor acts first.
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
      const BitAction r = act(it->op, idx, bit_position(it->atom, it->subsystem));
      if (r.amp == Complex{}) {
        amp = 0.0;
        break;
      }
      idx = r.index;
      amp *= r.amp;
    }
    if (amp != Complex{}) out[idx] += amp * a;
  }
}

void apply_site_op(const StateVector& in, StateVector& out, const SiteOperator& op, Complex coeff) {
  apply_product(in, out, std::span<const SiteOperator>(&op, 1), coeff);
}

void apply_two_site_op(const StateVector& in, StateVector& out, const SiteOperator& op_i,
                       const SiteOperator& op_j, Complex coeff) {
  if (op_i.atom == op_j.atom) throw std::invalid_argument("two-site operator needs distinct atoms");
  const std::array<SiteOperator, 2> ops = {op_i, op_j};
  apply_product(in, out, ops, coeff);
}

Complex inner(const StateVector& bra, const StateVector& ket) {
  check_same_space(bra, ket);
  Complex acc{};
  for (std::size_t i = 0; i < bra.size(); ++i) acc += std::conj(bra[i]) * ket[i];
  return acc;
}

double norm(const StateVector& psi) {
  double acc = 0.0;
  for (const Complex& a : psi.amplitudes()) acc += std::norm(a);
  return std::sqrt(acc);
}

void write_checkpoint(const std::string& path, const StateVector& psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  const std::uint32_t n = static_cast<std::uint32_t>(psi.n_atoms());
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(&kCheckpointVersion), sizeof kCheckpointVersion);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  static_assert(sizeof(Complex) == 2 * sizeof(double));
  out.write(reinterpret_cast<const char*>(psi.amplitudes().data()),
            static_cast<std::streamsize>(psi.size() * sizeof(Complex)));
  if (!out) throw std::runtime_error("short write on checkpoint '" + path + "'");
}

StateVector read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  std::array<char, 8> magic{};
  std::uint32_t version = 0;
  std::uint32_t n = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || magic != kMagic) throw std::runtime_error("'" + path + "' is not a checkpoint");
  if (version != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version");
  StateVector psi(static_cast<int>(n));
  in.read(reinterpret_cast<char*>(psi.amplitudes().data()),
          static_cast<std::streamsize>(psi.size() * sizeof(Complex)));
  if (!in) throw std::runtime_error("truncated checkpoint '" + path + "'");
  return psi;
}

}  // namespace rydtweezer
