#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rydtweezer {

using Complex = std::complex<double>;

// Basis layout: atom j owns bits 2j (internal, 0 = |g>, 1 = |R>) and 2j+1
// (motional, 0 = |0>, 1 = |1>). Bit value 1 is the upper vector of the 2x2
// matrix convention, so sigma^+ sigma^- = |1><1| is the phonon number.

enum class Subsystem { Internal, Motional };

enum class PauliOp {
  X,
  Y,      // -i (raise - lower)
  Z,      // +1 on the upper state
  Raise,  // |1><0| : tau^+ = |R><g|, sigma^+ = |1><0|
  Lower,
  Proj0,  // proj_g / proj_n0
  Proj1,  // proj_R / proj_n1
};

struct SiteOperator {
  int atom = 0;
  Subsystem subsystem = Subsystem::Internal;
  PauliOp op = PauliOp::Z;
};

struct LocalState {
  bool rydberg = false;
  bool excited = false;  // motional |1>
  friend bool operator==(const LocalState&, const LocalState&) = default;
};

/// 4^n_atoms; throws std::overflow_error when it does not fit in size_t.
std::size_t dimension(int n_atoms);

constexpr unsigned bit_position(int atom, Subsystem sub) {
  return 2u * static_cast<unsigned>(atom) + (sub == Subsystem::Motional ? 1u : 0u);
}

std::size_t encode(std::span<const LocalState> sites);
std::vector<LocalState> decode(std::size_t index, int n_atoms);

class StateVector {
 public:
  explicit StateVector(int n_atoms);

  int n_atoms() const { return n_atoms_; }
  std::size_t size() const { return amps_.size(); }

  std::span<Complex> amplitudes() { return amps_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  void set_zero();

 private:
  int n_atoms_;
  std::vector<Complex> amps_;
};

/// All atoms in |g, 0>.
StateVector initial_state(int n_atoms);

/// out += coeff * O_j in, with O acting on one bit of one atom.
void apply_site_op(const StateVector& in, StateVector& out, const SiteOperator& op, Complex coeff);

/// out += coeff * O_i O_j in. The two operators must act on different atoms.
void apply_two_site_op(const StateVector& in, StateVector& out, const SiteOperator& op_i,
                       const SiteOperator& op_j, Complex coeff);

/// out += coeff * (prod_k O_k) in for an arbitrary product of site operators
/// on distinct bits. apply_site_op and apply_two_site_op are special cases.
void apply_product(const StateVector& in, StateVector& out, std::span<const SiteOperator> factors,
                   Complex coeff);

Complex inner(const StateVector& bra, const StateVector& ket);
double norm(const StateVector& psi);

/// Binary amplitude checkpoint: "RYDTWZCK" magic, u32 version, u32 n_atoms
/// (little-endian), then 4^n (re, im) float64 pairs.
void write_checkpoint(const std::string& path, const StateVector& psi);
StateVector read_checkpoint(const std::string& path);

}  // namespace rydtweezer
