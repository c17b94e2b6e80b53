#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rydtweezer/config.hpp"
#include "rydtweezer/hamiltonian.hpp"
#include "rydtweezer/observables.hpp"

namespace rydtweezer {

/// NaN or Inf in the state: the integration cannot continue.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvolutionPlan {
  double dt_over_T = 1e-3;
  double t_final_over_T = 200.0;
  int record_stride = 10;
  MonitorOptions monitors;
  bool renormalize = false;  // rescale to unit norm at every recorded sample
  bool per_site = false;

  static EvolutionPlan from_config(const SystemConfig& config);
  void validate() const;
  /// Number of dt steps that reach t_final.
  std::size_t step_count() const;
};

/// Scratch vectors of one RK4 integrator; reuse across steps.
struct Rk4Workspace {
  explicit Rk4Workspace(std::size_t dim) : k(dim), acc(dim), stage(dim) {}

  std::vector<Complex> k;
  std::vector<Complex> acc;
  std::vector<Complex> stage;
};

/// One classical RK4 step of d psi/dt = -i H(t) psi with H at t, t + dt/2, t + dt.
/// Times in seconds. When `energy` is given it receives <psi|H(t)|psi> of the
/// incoming state, taken from the first stage.
void rk4_step_inplace(StateVector& psi, double t, double dt, const Hamiltonian& hamiltonian, Rk4Workspace& ws,
                      double* energy = nullptr);

/// Copying variant; throws NumericalError when the result is not finite.
StateVector rk4_step(const StateVector& psi, double t, double dt, const Hamiltonian& hamiltonian);

struct RunDiagnostics {
  std::size_t steps = 0;
  double max_norm_drift = 0.0;      // max |‖psi‖ - 1| over the samples
  double final_norm_drift = 0.0;
  double max_energy_drift = 0.0;    // max |E - E(knee)| / ‖H‖ after the ramp knee
  double energy_at_knee = 0.0;      // rad/s
  double hamiltonian_bound = 0.0;   // Gershgorin bound at full drive, rad/s
  std::vector<std::string> warnings;

  bool flagged() const { return !warnings.empty(); }
};

struct RunResult {
  TrajectoryRecord record;
  RunDiagnostics diagnostics;
  StateVector final_state{1};
};

/// Evolves `initial` from start_over_T to plan.t_final_over_T with the drive
/// protocol of the Hamiltonian's configuration. A step straddling the ramp knee
/// is split at the knee. Monitor breaches are reported as warnings.
RunResult evolve(const Hamiltonian& hamiltonian, const EvolutionPlan& plan, StateVector initial,
                 double start_over_T = 0.0);

/// Full protocol: all atoms in |g,0> at t = 0, ramped drive, sampled observables.
RunResult run(const SystemConfig& config);

}  // namespace rydtweezer
