#include "rydtweezer/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace rydtweezer {

namespace {

// y = x + a k, element-wise on real and imaginary parts.
inline void axpy(std::span<Complex> y, std::span<const Complex> x, double a, std::span<const Complex> k) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = {x[i].real() + a * k[i].real(), x[i].imag() + a * k[i].imag()};
}

inline void accumulate(std::span<Complex> y, double a, std::span<const Complex> k) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = {y[i].real() + a * k[i].real(), y[i].imag() + a * k[i].imag()};
}

bool all_finite(std::span<const Complex> v) {
  for (const Complex& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

std::string format_warning(const char* what, double value, double limit) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %.3e exceeds tolerance %.3e", what, value, limit);
  return buf;
}

}  // namespace

EvolutionPlan EvolutionPlan::from_config(const SystemConfig& config) {
  EvolutionPlan plan;
  plan.dt_over_T = config.dt_over_T;
  plan.t_final_over_T = config.t_final_over_T;
  plan.record_stride = config.record_stride;
  plan.monitors = config.monitors;
  plan.renormalize = config.renormalize;
  return plan;
}

void EvolutionPlan::validate() const {
  if (!(dt_over_T > 0.0) || !std::isfinite(dt_over_T)) throw std::invalid_argument("dt must be positive");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (!(t_final_over_T >= dt_over_T)) throw std::invalid_argument("t_final must be at least one step");
}

std::size_t EvolutionPlan::step_count() const {
  return static_cast<std::size_t>(std::llround(t_final_over_T / dt_over_T));
}

void rk4_step_inplace(StateVector& psi, double t, double dt, const Hamiltonian& h, Rk4Workspace& ws, double* energy) {
  const std::span<Complex> y = psi.amplitudes();
  const std::span<Complex> k = ws.k;
  const std::span<Complex> acc = ws.acc;
  const std::span<Complex> stage = ws.stage;
  const double omega_0 = h.omega_at(t);
  const double omega_half = h.omega_at(t + 0.5 * dt);
  const double omega_1 = h.omega_at(t + dt);

  h.apply_rhs(y, k, omega_0);
  if (energy) {
    // k = -i H psi, so <psi|H|psi> = Re(i <psi|k>).
    double e = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) e -= y[i].real() * k[i].imag() - y[i].imag() * k[i].real();
    *energy = e;
  }
  axpy(acc, y, dt / 6.0, k);
  axpy(stage, y, 0.5 * dt, k);
  h.apply_rhs(stage, k, omega_half);
  accumulate(acc, dt / 3.0, k);
  axpy(stage, y, 0.5 * dt, k);
  h.apply_rhs(stage, k, omega_half);
  accumulate(acc, dt / 3.0, k);
  axpy(stage, y, dt, k);
  h.apply_rhs(stage, k, omega_1);
  accumulate(acc, dt / 6.0, k);
  std::copy(acc.begin(), acc.end(), y.begin());
}

StateVector rk4_step(const StateVector& psi, double t, double dt, const Hamiltonian& hamiltonian) {
  if (psi.n_atoms() != hamiltonian.n_atoms()) throw std::invalid_argument("state dimension mismatch");
  StateVector out = psi;
  Rk4Workspace ws(psi.size());
  rk4_step_inplace(out, t, dt, hamiltonian, ws);
  if (!all_finite(out.amplitudes())) throw NumericalError("non-finite amplitude after RK4 step at t = " + std::to_string(t));
  return out;
}

RunResult evolve(const Hamiltonian& hamiltonian, const EvolutionPlan& plan, StateVector initial, double start_over_T) {
  plan.validate();
  if (initial.n_atoms() != hamiltonian.n_atoms()) throw std::invalid_argument("state dimension mismatch");
  const SystemConfig& config = hamiltonian.config();
  const double period = kTwoPi / config.omega0;
  const double dt = plan.dt_over_T * period;
  const double knee_over_T = config.ramp_enabled ? config.omega0 / config.ramp_rate_r : 0.0;
  const double knee = knee_over_T * period;
  const long long first_step = std::llround(start_over_T / plan.dt_over_T);
  const long long last_step = static_cast<long long>(plan.step_count());
  if (first_step > last_step) throw std::invalid_argument("start time lies after t_final");

  RunResult result;
  RunDiagnostics& diag = result.diagnostics;
  diag.hamiltonian_bound = hamiltonian.norm_bound(config.omega0);
  TrajectoryRecord& rec = result.record;
  const std::size_t n_samples = static_cast<std::size_t>((last_step - first_step) / plan.record_stride + 1);
  for (auto* column : {&rec.times, &rec.tau_z, &rec.sigma_z, &rec.sigma_x, &rec.sigma_y, &rec.energy, &rec.norm})
    column->reserve(n_samples);

  StateVector psi = std::move(initial);
  Rk4Workspace ws(psi.size());
  bool have_knee_energy = false;

  // Observables are taken before the step; the energy of the same state comes
  // from the step's first stage.
  struct Pending {
    ObservableSample sample;
    double norm = 0.0;
  };
  const auto observe = [&](long long step) {
    const double nrm = norm(psi);
    if (!std::isfinite(nrm))
      throw NumericalError("non-finite state at t/T = " + std::to_string(static_cast<double>(step) * plan.dt_over_T));
    Pending p{measure(psi, plan.per_site), nrm};
    p.sample.t_over_T = static_cast<double>(step) * plan.dt_over_T;
    if (plan.renormalize) {
      const double inv = 1.0 / nrm;
      for (Complex& a : psi.amplitudes()) a *= inv;
    }
    return p;
  };
  const auto commit = [&](const Pending& p, double t, double e) {
    if (plan.renormalize) e *= p.norm * p.norm;  // energy was taken on the rescaled state
    const double drift = std::abs(p.norm - 1.0);
    diag.max_norm_drift = std::max(diag.max_norm_drift, drift);
    diag.final_norm_drift = drift;
    if (t >= knee - 1e-9 * dt) {
      if (!have_knee_energy) {
        diag.energy_at_knee = e;
        have_knee_energy = true;
      }
      diag.max_energy_drift =
          std::max(diag.max_energy_drift, std::abs(e - diag.energy_at_knee) / diag.hamiltonian_bound);
    }
    rec.append(p.sample, khz_from_angular(e), p.norm);
  };

  const double slack = 1e-9 * dt;
  for (long long step = first_step; step < last_step; ++step) {
    const double t = static_cast<double>(step) * dt;
    const double t_next = static_cast<double>(step + 1) * dt;
    const bool sample = (step - first_step) % plan.record_stride == 0;
    Pending pending;
    if (sample) pending = observe(step);
    double e = 0.0;
    if (knee > t + slack && knee < t_next - slack) {
      rk4_step_inplace(psi, t, knee - t, hamiltonian, ws, sample ? &e : nullptr);
      rk4_step_inplace(psi, knee, t_next - knee, hamiltonian, ws);
    } else {
      rk4_step_inplace(psi, t, dt, hamiltonian, ws, sample ? &e : nullptr);
    }
    if (sample) commit(pending, t, e);
    ++diag.steps;
  }
  if ((last_step - first_step) % plan.record_stride == 0) {
    const double t = static_cast<double>(last_step) * dt;
    const Pending pending = observe(last_step);
    commit(pending, t, energy(hamiltonian, psi, t));
  }

  if (diag.max_norm_drift > plan.monitors.norm_drift_tolerance)
    diag.warnings.push_back(format_warning("norm drift", diag.max_norm_drift, plan.monitors.norm_drift_tolerance));
  if (diag.max_energy_drift > plan.monitors.energy_drift_tolerance)
    diag.warnings.push_back(
        format_warning("post-ramp energy drift", diag.max_energy_drift, plan.monitors.energy_drift_tolerance));
  result.final_state = std::move(psi);
  return result;
}

RunResult run(const SystemConfig& config) {
  config.validate();
  const Hamiltonian hamiltonian(config, derive(config));
  return evolve(hamiltonian, EvolutionPlan::from_config(config), initial_state(config.n_atoms));
}

}  // namespace rydtweezer
