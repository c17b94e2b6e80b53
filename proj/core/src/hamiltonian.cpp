#include "rydtweezer/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rydtweezer {

namespace {

// Explicit real arithmetic: std::complex operator* goes through the
// Annex G NaN-recovery path, which dominates the matvec cost otherwise.
inline Complex mul(Complex a, Complex b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline bool is_diagonal(PauliOp op) {
  return op == PauliOp::Z || op == PauliOp::Proj0 || op == PauliOp::Proj1;
}

constexpr SiteOperator internal(int atom, PauliOp op) { return {atom, Subsystem::Internal, op}; }
constexpr SiteOperator motional(int atom, PauliOp op) { return {atom, Subsystem::Motional, op}; }

struct Action {
  std::size_t index;
  Complex amp;
};

Action act_product(const std::vector<SiteOperator>& factors, std::size_t index) {
  Complex amp = 1.0;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
    const std::size_t mask = std::size_t{1} << bit_position(it->atom, it->subsystem);
    const bool up = (index & mask) != 0;
    switch (it->op) {
      case PauliOp::X: index ^= mask; break;
      case PauliOp::Y:
        amp *= up ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
        index ^= mask;
        break;
      case PauliOp::Z:
        if (!up) amp = -amp;
        break;
      case PauliOp::Raise:
        if (up) return {index, 0.0};
        index |= mask;
        break;
      case PauliOp::Lower:
        if (!up) return {index, 0.0};
        index &= ~mask;
        break;
      case PauliOp::Proj0:
        if (up) return {index, 0.0};
        break;
      case PauliOp::Proj1:
        if (!up) return {index, 0.0};
        break;
    }
  }
  return {index, amp};
}

std::size_t local_offset(std::size_t s, int atom_lo, int atom_hi) {
  std::size_t off = (s & 3u) << (2 * atom_lo);
  if (atom_hi >= 0) off |= (s >> 2) << (2 * atom_hi);
  return off;
}

}  // namespace

RabiCouplings rabi_couplings(const DerivedParams& d) {
  const double env = std::exp(-0.5 * d.eta_gR * d.eta_gR);
  const double z = d.zeta;
  const double z3 = z * z * z;
  return {Complex(z * env, 0.0), Complex(0.0, d.eta_g * z3 * env), Complex(0.0, d.eta_R * z3 * env),
          Complex((1.0 - d.eta_gR * d.eta_gR) * z3 * env, 0.0)};
}

std::vector<Term> build_rabi_term(const SystemConfig& config, const DerivedParams& derived) {
  const RabiCouplings c = rabi_couplings(derived);
  std::vector<Term> terms;
  terms.reserve(8 * static_cast<std::size_t>(config.n_atoms));
  for (int j = 0; j < config.n_atoms; ++j) {
    using enum PauliOp;
    // <R,m'|H|g,m> = (Omega / 2) c, written as tau^+ (x) motional operator, plus h.c.
    const auto add = [&](Complex value, PauliOp motional_op, PauliOp motional_op_dagger) {
      terms.push_back({0.5 * value, {internal(j, Raise), motional(j, motional_op)}});
      terms.push_back({0.5 * std::conj(value), {internal(j, Lower), motional(j, motional_op_dagger)}});
    };
    add(c.carrier_0, Proj0, Proj0);
    add(c.blue, Raise, Lower);
    add(c.red, Lower, Raise);
    add(c.carrier_1, Proj1, Proj1);
  }
  return terms;
}

std::vector<Term> build_trap_term(const SystemConfig& config) {
  const double omega_bar = 0.5 * (config.omega_trap_g + config.omega_trap_R);
  const double delta = config.omega_trap_R - config.omega_trap_g;
  std::vector<Term> terms;
  for (int j = 0; j < config.n_atoms; ++j) {
    terms.push_back({omega_bar - 0.5 * delta, {internal(j, PauliOp::Proj0), motional(j, PauliOp::Proj1)}});
    terms.push_back({omega_bar + 0.5 * delta, {internal(j, PauliOp::Proj1), motional(j, PauliOp::Proj1)}});
  }
  return terms;
}

std::vector<std::pair<int, int>> nearest_neighbour_bonds(int n_atoms, Boundary boundary) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < n_atoms; ++i) bonds.emplace_back(i, i + 1);
  // A ring of two atoms has a single bond; it is not counted twice.
  if (boundary == Boundary::Periodic && n_atoms > 2) bonds.emplace_back(n_atoms - 1, 0);
  return bonds;
}

std::vector<Term> build_interaction_term(const SystemConfig& config, const DerivedParams& derived) {
  std::vector<Term> terms;
  for (const auto& [i, j] : nearest_neighbour_bonds(config.n_atoms, config.boundary)) {
    using enum PauliOp;
    const SiteOperator pi = internal(i, Proj1);
    const SiteOperator pj = internal(j, Proj1);
    terms.push_back({derived.v0, {pi, pj}});
    terms.push_back({derived.v1, {pi, pj, motional(i, X)}});
    terms.push_back({-derived.v1, {pi, pj, motional(j, X)}});
    terms.push_back({0.5 * derived.v2, {pi, pj, motional(i, Raise), motional(j, Lower)}});
    terms.push_back({0.5 * derived.v2, {pi, pj, motional(i, Lower), motional(j, Raise)}});
  }
  return terms;
}

HamiltonianTerms build_terms(const SystemConfig& config, const DerivedParams& derived) {
  HamiltonianTerms t;
  t.n_atoms = config.n_atoms;
  t.static_part = build_trap_term(config);
  auto interaction = build_interaction_term(config, derived);
  t.static_part.insert(t.static_part.end(), interaction.begin(), interaction.end());
  t.rabi_part = build_rabi_term(config, derived);
  return t;
}

Hamiltonian::Hamiltonian(const SystemConfig& config, const DerivedParams& derived)
    : Hamiltonian(config, build_terms(config, derived)) {}

Hamiltonian::Hamiltonian(const SystemConfig& config, HamiltonianTerms terms)
    : config_(config), terms_(std::move(terms)) {
  if (terms_.n_atoms != config_.n_atoms) throw std::invalid_argument("term list and config disagree on n_atoms");
  compile();
}

void Hamiltonian::compile() {
  const std::size_t dim = rydtweezer::dimension(terms_.n_atoms);
  diag_static_.assign(dim, 0.0);
  diag_rabi_.assign(dim, 0.0);

  const auto add_terms = [&](const std::vector<Term>& list, bool driven) {
    for (const Term& term : list) {
      std::set<int> atoms;
      bool diagonal = true;
      for (const auto& f : term.factors) {
        if (f.atom < 0 || f.atom >= terms_.n_atoms) throw std::out_of_range("term touches a missing atom");
        atoms.insert(f.atom);
        diagonal = diagonal && is_diagonal(f.op);
      }
      if (diagonal) {
        if (std::abs(term.coeff.imag()) > 0.0) throw std::invalid_argument("diagonal term must be real");
        auto& diag = driven ? diag_rabi_ : diag_static_;
        for (std::size_t i = 0; i < dim; ++i) {
          const Action a = act_product(term.factors, i);
          diag[i] += (term.coeff * a.amp).real();
        }
        continue;
      }
      if (atoms.empty() || atoms.size() > 2)
        throw std::invalid_argument("off-diagonal terms must touch one atom or one bond");
      const int lo = *atoms.begin();
      const int hi = atoms.size() == 2 ? *atoms.rbegin() : -1;
      auto it = std::find_if(blocks_.begin(), blocks_.end(), [&](const Block& b) {
        return b.atom_lo == lo && b.atom_hi == hi && b.driven == driven;
      });
      if (it == blocks_.end()) {
        blocks_.push_back({lo, hi, driven, {}});
        it = std::prev(blocks_.end());
      }
      const std::size_t local_dim = hi >= 0 ? 16 : 4;
      for (std::size_t col = 0; col < local_dim; ++col) {
        const Action a = act_product(term.factors, local_offset(col, lo, hi));
        if (a.amp == Complex{}) continue;
        std::size_t row = 0;
        while (row < local_dim && local_offset(row, lo, hi) != a.index) ++row;
        const Complex value = term.coeff * a.amp;
        auto e = std::find_if(it->entries.begin(), it->entries.end(),
                              [&](const Entry& x) { return x.row == row && x.col == col; });
        if (e == it->entries.end())
          it->entries.push_back({static_cast<unsigned char>(row), static_cast<unsigned char>(col), value});
        else
          e->value += value;
      }
    }
  };
  add_terms(terms_.static_part, false);
  add_terms(terms_.rabi_part, true);
  if (std::all_of(diag_rabi_.begin(), diag_rabi_.end(), [](double v) { return v == 0.0; }))
    diag_rabi_.clear();
  std::stable_sort(blocks_.begin(), blocks_.end(), [](const Block& a, const Block& b) {
    return std::tie(a.atom_hi, a.atom_lo, a.driven) < std::tie(b.atom_hi, b.atom_lo, b.driven);
  });
}

template <bool Rhs>
void Hamiltonian::apply_impl(std::span<const Complex> in, std::span<Complex> out, double omega) const {
  const std::size_t dim = diag_static_.size();
  if (in.size() != dim || out.size() != dim) throw std::invalid_argument("state dimension mismatch");
  if (in.data() == out.data()) throw std::invalid_argument("in-place Hamiltonian application");

  const bool rabi_diag = !diag_rabi_.empty();
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = diag_static_[i] + (rabi_diag ? omega * diag_rabi_[i] : 0.0);
    if constexpr (Rhs)
      out[i] = {d * in[i].imag(), -d * in[i].real()};
    else
      out[i] = d * in[i];
  }

  constexpr std::size_t kMaxEntries = 256;
  Complex values[kMaxEntries];
  std::size_t rows[kMaxEntries];
  std::size_t cols[kMaxEntries];
  for (const Block& block : blocks_) {
    Complex scale = block.driven ? Complex(omega, 0.0) : Complex(1.0, 0.0);
    if constexpr (Rhs) scale = mul(scale, Complex(0.0, -1.0));
    const std::size_t n_entries = block.entries.size();
    for (std::size_t e = 0; e < n_entries; ++e) {
      values[e] = mul(scale, block.entries[e].value);
      rows[e] = local_offset(block.entries[e].row, block.atom_lo, block.atom_hi);
      cols[e] = local_offset(block.entries[e].col, block.atom_lo, block.atom_hi);
    }
    const auto kernel = [&](std::size_t base) {
      for (std::size_t e = 0; e < n_entries; ++e) {
        Complex& o = out[base + rows[e]];
        const Complex x = in[base + cols[e]];
        const Complex v = values[e];
        o = {o.real() + v.real() * x.real() - v.imag() * x.imag(),
             o.imag() + v.real() * x.imag() + v.imag() * x.real()};
      }
    };
    if (block.atom_hi < 0) {
      const std::size_t s = std::size_t{1} << (2 * block.atom_lo);
      for (std::size_t hi = 0; hi < dim; hi += 4 * s)
        for (std::size_t lo = 0; lo < s; ++lo) kernel(hi + lo);
    } else {
      const std::size_t s_lo = std::size_t{1} << (2 * block.atom_lo);
      const std::size_t s_hi = std::size_t{1} << (2 * block.atom_hi);
      for (std::size_t a = 0; a < dim; a += 4 * s_hi)
        for (std::size_t b = 0; b < s_hi; b += 4 * s_lo)
          for (std::size_t c = 0; c < s_lo; ++c) kernel(a + b + c);
    }
  }
}

void Hamiltonian::apply(const StateVector& in, StateVector& out, double omega) const {
  apply_impl<false>(in.amplitudes(), out.amplitudes(), omega);
}

void Hamiltonian::apply_rhs(std::span<const Complex> in, std::span<Complex> out, double omega) const {
  apply_impl<true>(in, out, omega);
}

double Hamiltonian::norm_bound(double omega) const {
  double diag_max = 0.0;
  for (std::size_t i = 0; i < diag_static_.size(); ++i) {
    const double d = diag_static_[i] + (diag_rabi_.empty() ? 0.0 : omega * diag_rabi_[i]);
    diag_max = std::max(diag_max, std::abs(d));
  }
  double offdiag = 0.0;
  for (const Block& block : blocks_) {
    double row_sum[16] = {};
    for (const Entry& e : block.entries) row_sum[e.row] += std::abs(e.value);
    const double scale = block.driven ? std::abs(omega) : 1.0;
    offdiag += scale * *std::max_element(std::begin(row_sum), std::end(row_sum));
  }
  return diag_max + offdiag;
}

std::size_t Hamiltonian::apply_cost() const {
  const std::size_t dim = diag_static_.size();
  std::size_t cost = dim;
  for (const Block& block : blocks_) cost += block.entries.size() * (dim / (block.atom_hi >= 0 ? 16 : 4));
  return cost;
}

StateVector apply_hamiltonian(const Hamiltonian& hamiltonian, const StateVector& psi, double t_seconds) {
  if (psi.n_atoms() != hamiltonian.n_atoms()) throw std::invalid_argument("state dimension mismatch");
  StateVector out(psi.n_atoms());
  hamiltonian.apply(psi, out, hamiltonian.omega_at(t_seconds));
  return out;
}

double energy(const Hamiltonian& hamiltonian, const StateVector& psi, double t_seconds) {
  return inner(psi, apply_hamiltonian(hamiltonian, psi, t_seconds)).real();
}

}  // namespace rydtweezer
