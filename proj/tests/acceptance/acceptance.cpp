// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rydtweezer/csv.hpp"
#include "rydtweezer/dense.hpp"
#include "rydtweezer/evolve.hpp"
#include "rydtweezer/oracle.hpp"
#include "rydtweezer/sweep.hpp"

using namespace rydtweezer;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool passed = false;
  std::string detail;
};

struct Context {
  fs::path output;
  bool resume = false;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double max_abs(const std::vector<double>& v, double shift = 0.0) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x + shift));
  return m;
}

// Runs one configuration into <output>/runs/<hash>/ and reads back the record.
struct StoredRun {
  RunManifest manifest;
  TrajectoryRecord record;
};

StoredRun stored_run(const Context& ctx, const json& doc) {
  const SystemConfig c = config_from_json(doc);
  const RunManifest m = execute_run(c, RunOptions{ctx.output, ctx.resume, false});
  if (!m.ok) throw std::runtime_error("run failed: " + m.error);
  return {m, read_timeseries_csv((run_directory(ctx.output, m.hash) / "timeseries.csv").string())};
}

Verdict blockade_radius_check(const Context&) {
  const DerivedParams d = derive(SystemConfig{});
  return {std::abs(d.blockade_radius_Rb - 2.154) <= 0.005, fmt("R_b = %.5f um", d.blockade_radius_Rb)};
}

Verdict linkage_check(const Context&) {
  SweepSpec s;
  s.base = json{{"eta_reference", 0.1}, {"eta_reference_omega_trap", 10.0}};
  const double omega[] = {0.5, 1.0, 3.0, 6.0, 10.0, 14.0};
  const double eta[] = {0.45, 0.32, 0.18, 0.13, 0.1, 0.08};
  s.axes = {{"omega_trap_R", std::vector<json>(std::begin(omega), std::end(omega))}};
  const auto grid = expand_grid(s);
  double worst = 0.0;
  std::string values;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = derive(grid[i]).eta_R;
    worst = std::max(worst, std::abs(e - eta[i]));
    values += fmt("%s%.4f", i ? " " : "", e);
  }
  return {grid.size() == 6 && worst <= 0.005, fmt("eta_R = %s, max deviation %.4f", values.c_str(), worst)};
}

Verdict franck_condon_check(const Context&) {
  const PhysicalConstants pc;
  const double k = 0.1 * std::sqrt(2.0) / oscillator_length(pc, angular_from_khz(10.0));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      SystemConfig c;
      c.eta_override.reset();
      c.laser_wavevector_k = k;
      c.omega_trap_g = angular_from_khz(0.5 + 19.5 * i / 9.0);
      c.omega_trap_R = angular_from_khz(0.5 + 19.5 * j / 9.0);
      const DerivedParams d = derive(c);
      const RabiCouplings r = rabi_couplings(d);
      const auto q = oracle::franck_condon_quadrature(d.x0_g, d.x0_R, k);
      for (auto [got, want] : {std::pair{r.carrier_0, q.c00}, std::pair{r.blue, q.c10}, std::pair{r.red, q.c01},
                               std::pair{r.carrier_1, q.c11}})
        worst = std::max(worst, std::abs(got - want) / std::abs(want));
    }
  }
  return {worst < 1e-8, fmt("max relative error %.2e over 100 trap pairs x 4 elements", worst)};
}

Verdict dense_oracle_check(const Context&) {
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> g;
  double worst_apply = 0.0, worst_herm = 0.0;
  for (int n : {2, 3}) {
    SystemConfig c;
    c.n_atoms = n;
    c.spacing_over_Rb = 1.2;
    c.omega_trap_R = angular_from_khz(12.5);
    c.eta_override = LambDickePair{0.1, 0.09};
    const DerivedParams d = derive(c);
    const Hamiltonian h(c, d);
    std::uniform_real_distribution<double> when(0.0, 20.0 * d.rabi_period_T);
    for (int trial = 0; trial < 20; ++trial) {
      const double t = when(rng);
      StateVector psi(n);
      for (auto& a : psi.amplitudes()) a = {g(rng), g(rng)};
      const StateVector hpsi = apply_hamiltonian(h, psi, t);
      const DenseMatrix ref = oracle::dense_hamiltonian(c, d, h.omega_at(t));
      Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.size()));
      Eigen::Map<const Eigen::VectorXcd> got(hpsi.amplitudes().data(), static_cast<Eigen::Index>(hpsi.size()));
      const Eigen::VectorXcd want = ref * v;
      worst_apply = std::max(worst_apply, (got - want).norm() / want.norm());
      const DenseMatrix m = to_dense(h, t);
      worst_herm = std::max(worst_herm, (m - m.adjoint()).cwiseAbs().maxCoeff() / m.cwiseAbs().maxCoeff());
    }
  }
  return {worst_apply < 1e-12 && worst_herm < 1e-12,
          fmt("max |H psi - H_dense psi| / |H psi| = %.2e, max |H - H^dag| / max|H| = %.2e", worst_apply, worst_herm)};
}

Verdict rabi_check(const Context&) {
  SystemConfig c;
  c.n_atoms = 1;
  c.eta_override = LambDickePair{0.0, 0.0};
  c.ramp_enabled = false;
  c.t_final_over_T = 10.0;
  c.steady_window = {0.0, 10.0};
  c.record_stride = 1;
  const DerivedParams d = derive(c);
  const RunResult r = run(c);
  const double w = oracle::effective_rabi(d, c.omega0);
  double worst = 0.0;
  for (std::size_t i = 0; i < r.record.size(); ++i)
    worst = std::max(worst, std::abs(r.record.tau_z[i] - oracle::rabi_tau_z(w, r.record.times[i] * d.rabi_period_T)));

  auto drift = [&](double dt) {
    SystemConfig s = c;
    s.dt_over_T = dt;
    s.steady_window = {0.0, 10.0};
    return run(s).diagnostics.max_norm_drift;
  };
  const double coarse = drift(2e-2), fine = drift(1e-2);
  const double ratio = coarse / fine;
  return {worst < 1e-8 && ratio >= 8.0 && ratio <= 32.0,
          fmt("max |tau_z + cos| = %.2e; norm drift %.3e -> %.3e on halving dt, ratio %.2f", worst, coarse, fine,
              ratio)};
}

Verdict decoupled_check(const Context& ctx) {
  const StoredRun s = stored_run(ctx, json{{"n_atoms", 6}, {"eta_g", 0.0}, {"eta_R", 0.0}});
  const auto& rec = s.record;
  const auto& diag = s.manifest.label.diagnostics;
  const double sx = max_abs(rec.sigma_x), sy = max_abs(rec.sigma_y), sz = max_abs(rec.sigma_z, 1.0);
  const double eps_m = s.manifest.config["epsilon_m"].get<double>();
  const bool one_line = diag.companion_count == 1 && std::abs(diag.dominant_freq - 10.0) <= diag.resolution;
  const bool ok = sx <= 1e-10 && sy <= 1e-10 && sz <= eps_m && one_line &&
                  s.manifest.label.kind == PhaseKind::RabiOscillation;
  return {ok, fmt("max|sx| %.1e, max|sy| %.1e, max|sz+1| %.2e (limit %.0e), line %.3f kHz (%zu above companion "
                  "level), motional %.2e, %s",
                  sx, sy, sz, eps_m, diag.dominant_freq, diag.companion_count, diag.motional_activity,
                  std::string(to_string(s.manifest.label.kind)).c_str())};
}

Verdict weak_regime_check(const Context& ctx) {
  const StoredRun s = stored_run(ctx, json{{"n_atoms", 6}, {"eta_g", 0.1}, {"eta_R", 0.1}});
  const auto& diag = s.manifest.label.diagnostics;
  std::size_t near = 0;
  for (const Peak& p : s.manifest.peaks.peaks) near += std::abs(p.freq - 10.0) <= 1.0 ? 1 : 0;
  const double sx = max_abs(s.record.sigma_x);
  const double eps_m = s.manifest.config["epsilon_m"].get<double>();
  const bool ok = near >= 2 && s.manifest.label.kind == PhaseKind::LimitTorus && sx > 10 * eps_m;
  return {ok, fmt("%zu significant peaks within 1 kHz of 10 kHz (%.3f, %.3f; ratio %.4f ~ %ld/%ld off by %.3f), "
                  "max|sx| %.3f, %s",
                  near, diag.dominant_freq, diag.second_freq, diag.frequency_ratio, diag.best_rational.p,
                  diag.best_rational.q, diag.rational_error, sx, std::string(to_string(s.manifest.label.kind)).c_str())};
}

Verdict limit_cycle_check(const Context& ctx) {
  const StoredRun s = stored_run(ctx, json{{"n_atoms", 6}, {"omega_trap_R", 14.0}, {"eta_g", 0.1}, {"eta_R", 0.08}});
  const auto& diag = s.manifest.label.diagnostics;
  const double bins = std::round(std::abs(diag.dominant_freq - 10.0) / diag.resolution);
  const bool ok = s.manifest.label.kind == PhaseKind::LimitCycle && bins > 1.0;
  return {ok, fmt("%s, dominant %.3f kHz = %.0f bin(s) from 10 kHz (need > 1), resolution %.3f kHz",
                  std::string(to_string(s.manifest.label.kind)).c_str(), diag.dominant_freq, bins, diag.resolution)};
}

Verdict energy_check(const Context&) {
  SystemConfig c;
  c.n_atoms = 4;
  c.t_final_over_T = 60.0;  // knee at 10 T, then 50 T at constant drive
  c.steady_window = {10.0, 60.0};
  const RunResult r = run(c);
  const RunDiagnostics& d = r.diagnostics;
  double worst = 0.0;
  for (std::size_t i = 0; i < r.record.size(); ++i)
    if (r.record.times[i] >= 10.0 - 1e-9)
      worst = std::max(worst, std::abs(angular_from_khz(r.record.energy[i]) - d.energy_at_knee));
  const double rel_bound = worst / d.hamiltonian_bound;
  const double rel_value = worst / std::abs(d.energy_at_knee);
  return {rel_bound < 1e-6 && rel_value < 1e-6,
          fmt("max |E - E(10T)| = %.3e rad/s: %.2e of |E(10T)| = %.4e, %.2e of the norm bound", worst, rel_value,
              std::abs(d.energy_at_knee), rel_bound)};
}

Verdict determinism_check(const Context& ctx) {
  SweepSpec s;
  s.base = json{{"n_atoms", 4}, {"eta_reference", 0.1}, {"eta_reference_omega_trap", 10.0}};
  s.axes = {{"omega_trap_R", {json(0.5), json(1.0), json(3.0), json(6.0), json(10.0), json(14.0)}}};
  const fs::path a = ctx.output / "determinism-p1", b = ctx.output / "determinism-p8";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto ma = execute_sweep(s, 1, RunOptions{a, false, false});
  const auto mb = execute_sweep(s, 8, RunOptions{b, false, false});
  std::size_t compared = 0, differing = 0;
  bool all_ok = true;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    all_ok = all_ok && ma[i].ok && mb[i].ok && ma[i].hash == mb[i].hash;
    for (const char* f : {"timeseries.csv", "spectrum_internal.csv", "spectrum_motional.csv", "phasespace.csv"}) {
      ++compared;
      if (slurp(run_directory(a, ma[i].hash) / f) != slurp(run_directory(b, mb[i].hash) / f)) ++differing;
    }
  }
  ++compared;
  if (slurp(a / "phase_diagram.csv") != slurp(b / "phase_diagram.csv")) ++differing;
  std::string labels;
  for (const auto& m : ma) labels += (labels.empty() ? "" : " ") + std::string(to_string(m.label.kind));
  return {all_ok && ma.size() == 6 && differing == 0,
          fmt("%zu files compared byte for byte, %zu differ; labels %s", compared, differing, labels.c_str())};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict(const Context&)> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-10"};
  Context ctx;
  std::string output = "acceptance-out";
  std::vector<int> only;
  app.add_option("--output", output, "directory for run outputs");
  app.add_option("--only", only, "run only these criteria");
  app.add_flag("--resume", ctx.resume, "reuse complete run directories from a previous invocation");
  CLI11_PARSE(app, argc, argv);
  ctx.output = output;
  fs::create_directories(ctx.output);

  const std::vector<Criterion> criteria{
      {1, "blockade radius", blockade_radius_check},
      {2, "Lamb-Dicke linkage of the six phase-diagram points", linkage_check},
      {3, "Franck-Condon elements vs quadrature", franck_condon_check},
      {4, "matrix-free H vs dense construction, n = 2, 3", dense_oracle_check},
      {5, "single-atom Rabi closed form and RK4 order", rabi_check},
      {6, "decoupled limit, n = 6, 200 T", decoupled_check},
      {7, "weak coupling, equal traps, n = 6, 200 T", weak_regime_check},
      {8, "limit-cycle point, n = 6, 200 T", limit_cycle_check},
      {9, "post-ramp energy conservation, n = 4, 50 T", energy_check},
      {10, "sweep determinism, parallelism 1 vs 8, n = 4", determinism_check},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check(ctx);
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s: %s [%.1f s]\n", c.id, v.passed ? "PASS" : "FAIL", c.title, v.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += v.passed ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
