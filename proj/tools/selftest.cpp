#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "rydtweezer/dense.hpp"
#include "rydtweezer/evolve.hpp"
#include "rydtweezer/oracle.hpp"

namespace rydtweezer::selftest {

namespace {

// Strong, asymmetric setting so that every term of H carries weight.
SystemConfig oracle_config(int n_atoms) {
  SystemConfig c;
  c.n_atoms = n_atoms;
  c.spacing_over_Rb = 1.2;
  c.omega_trap_R = angular_from_khz(12.5);
  c.eta_override = LambDickePair{0.1, 0.09};
  c.boundary = n_atoms > 2 ? Boundary::Periodic : Boundary::Open;
  return c;
}

Hamiltonian compile(const SystemConfig& config, const Options& options) {
  HamiltonianTerms terms = build_terms(config, derive(config));
  if (options.mutate) options.mutate(terms);
  return Hamiltonian(config, std::move(terms));
}

StateVector random_state(int n_atoms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector psi(n_atoms);
  for (auto& a : psi.amplitudes()) a = {g(rng), g(rng)};
  const double nrm = norm(psi);
  for (auto& a : psi.amplitudes()) a /= nrm;
  return psi;
}

Check make(std::string name, double value, double limit) { return {std::move(name), value < limit, value, limit}; }

}  // namespace

std::vector<Check> hermiticity(const Options& options) {
  std::vector<Check> out;
  for (int n : {2, 3}) {
    const SystemConfig c = oracle_config(n);
    const Hamiltonian h = compile(c, options);
    const DenseMatrix m = to_dense(h.terms(), c.omega0);
    const double err = (m - m.adjoint()).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff();
    out.push_back(make("hermiticity n=" + std::to_string(n), err, 1e-12));
  }
  return out;
}

std::vector<Check> dense_oracle(const Options& options) {
  std::vector<Check> out;
  std::mt19937_64 rng(20240611);
  for (int n : {2, 3}) {
    const SystemConfig c = oracle_config(n);
    const DerivedParams d = derive(c);
    const Hamiltonian h = compile(c, options);
    const double period = kTwoPi / c.omega0;
    std::uniform_real_distribution<double> when(0.0, 20.0 * period);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const double t = when(rng);
      const StateVector psi = random_state(n, rng);
      const StateVector hpsi = apply_hamiltonian(h, psi, t);
      const DenseMatrix ref = oracle::dense_hamiltonian(c, d, h.omega_at(t));
      Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.size()));
      const Eigen::VectorXcd expected = ref * v;
      Eigen::Map<const Eigen::VectorXcd> got(hpsi.amplitudes().data(), expected.size());
      worst = std::max(worst, (got - expected).norm() / expected.norm());
    }
    out.push_back(make("dense oracle n=" + std::to_string(n), worst, 1e-12));
  }
  return out;
}

std::vector<Check> franck_condon(const Options&) {
  const PhysicalConstants constants;
  const double k = 0.1 * std::numbers::sqrt2 / oscillator_length(constants, angular_from_khz(10.0));
  double worst = 0.0;
  for (int a = 0; a < 10; ++a) {
    for (int b = 0; b < 10; ++b) {
      SystemConfig c;
      c.omega_trap_g = angular_from_khz(2.0 + 2.0 * a);
      c.omega_trap_R = angular_from_khz(2.0 + 2.0 * b);
      c.eta_override.reset();
      c.laser_wavevector_k = k;
      const DerivedParams d = derive(c);
      const RabiCouplings analytic = rabi_couplings(d);
      const auto q = oracle::franck_condon_quadrature(d.x0_g, d.x0_R, k);
      const std::pair<Complex, Complex> pairs[] = {
          {analytic.carrier_0, q.c00}, {analytic.blue, q.c10}, {analytic.red, q.c01}, {analytic.carrier_1, q.c11}};
      for (const auto& [x, y] : pairs) worst = std::max(worst, std::abs(x - y) / std::abs(y));
    }
  }
  return {make("franck-condon quadrature 10x10", worst, 1e-8)};
}

std::vector<Check> rabi_closed_form(const Options& options) {
  SystemConfig c;
  c.eta_override = LambDickePair{0.0, 0.0};
  c.ramp_enabled = false;
  c.dt_over_T = options.dt_over_T;
  c.t_final_over_T = 10.0;
  c.steady_window = {0.0, 10.0};
  c.record_stride = 1;
  const DerivedParams d = derive(c);
  const Hamiltonian h = compile(c, options);
  const RunResult r = evolve(h, EvolutionPlan::from_config(c), initial_state(1));
  const double omega_eff = oracle::effective_rabi(d, c.omega0);
  const double period = kTwoPi / c.omega0;
  double worst = 0.0;
  for (std::size_t i = 0; i < r.record.size(); ++i)
    worst = std::max(worst, std::abs(r.record.tau_z[i] - oracle::rabi_tau_z(omega_eff, r.record.times[i] * period)));
  return {make("rabi closed form, 10 periods", worst, 1e-8)};
}

std::vector<Check> norm_drift(const Options& options) {
  SystemConfig c = oracle_config(2);
  c.dt_over_T = options.dt_over_T;
  c.t_final_over_T = 10.0;
  c.steady_window = {0.0, 10.0};
  c.record_stride = 1;
  const Hamiltonian h = compile(c, options);
  const RunResult r = evolve(h, EvolutionPlan::from_config(c), initial_state(2));
  return {make("norm drift n=2, 10T", r.diagnostics.max_norm_drift, 1e-6)};
}

std::vector<Check> exact_propagation(const Options& options) {
  SystemConfig c = oracle_config(2);
  c.ramp_enabled = false;
  c.dt_over_T = options.dt_over_T;
  c.t_final_over_T = 10.0;
  c.steady_window = {0.0, 10.0};
  c.record_stride = 1;
  const DerivedParams d = derive(c);
  const Hamiltonian h = compile(c, options);
  const RunResult r = evolve(h, EvolutionPlan::from_config(c), initial_state(2));
  const double period = kTwoPi / c.omega0;
  const StateVector exact = exact_propagate(initial_state(2), oracle::dense_hamiltonian(c, d, c.omega0), 10.0 * period);
  const double overlap = std::abs(inner(r.final_state, exact));
  return {make("exact propagator overlap n=2, 10T", 1.0 - overlap, 1e-6)};
}

std::vector<Check> run_all(const Options& options) {
  std::vector<Check> all;
  for (auto suite : {hermiticity, dense_oracle, franck_condon, rabi_closed_form, norm_drift, exact_propagation}) {
    auto part = suite(options);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

void flip_exchange_sign(HamiltonianTerms& terms) {
  for (Term& t : terms.static_part)
    if (t.factors.size() == 4) t.coeff = -t.coeff;
}

void print(std::ostream& out, const std::vector<Check>& checks) {
  char line[200];
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%s  %-36s %.3e (limit %.0e)\n", c.passed ? "PASS" : "FAIL", c.name.c_str(),
                  c.value, c.limit);
    out << line;
  }
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

}  // namespace rydtweezer::selftest
