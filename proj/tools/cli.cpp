#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rydtweezer/csv.hpp"
#include "rydtweezer/dense.hpp"
#include "rydtweezer/sweep.hpp"
#include "selftest.hpp"

namespace rydtweezer::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string key_table() {
  std::ostringstream s;
  s << "Configuration keys (JSON file or --set key=value; frequencies in kHz, 2 pi applied internally):\n";
  for (const auto& k : config_schema()) {
    char line[256];
    std::snprintf(line, sizeof line, "  %-26s [%s] %s\n", std::string(k.name).c_str(), std::string(k.unit).c_str(),
                  std::string(k.description).c_str());
    s << line;
  }
  s << "\nEnvironment: RYDTWEEZER_OUTPUT sets the default output root.\n"
       "Exit codes: 0 success, 1 configuration or input error, 2 numerical failure, 3 selftest failure.\n";
  return s.str();
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in '" + path + "': " + e.what());
  }
}

void print_label(std::ostream& out, const RunManifest& m) {
  const PhaseDiagnostics& d = m.label.diagnostics;
  char line[256];
  out << "phase: " << to_string(m.label.kind) << '\n';
  std::snprintf(line, sizeof line, "dominant %.4f kHz, second %.4f kHz (ratio %.3f), freq ratio %.4f ~ %ld/%ld\n",
                d.dominant_freq, d.second_freq, d.peak_ratio, d.frequency_ratio, d.best_rational.p, d.best_rational.q);
  out << line;
  std::snprintf(line, sizeof line, "motional activity %.3e, resolution %.4f kHz, %zu peaks\n", d.motional_activity,
                d.resolution, d.peak_count);
  out << line;
  std::snprintf(line, sizeof line, "norm drift %.3e, post-ramp energy drift %.3e\n", m.diagnostics.max_norm_drift,
                m.diagnostics.max_energy_drift);
  out << line;
  for (const auto& w : m.diagnostics.warnings) out << "warning: " << w << '\n';
}

struct RunArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  bool renormalize = false;
  bool per_site = false;
  bool no_resume = false;
  std::string dump_hamiltonian;
};

struct SweepArgs {
  std::string spec_path;
  std::vector<std::string> overrides;
  bool no_resume = false;
};

struct WindowArgs {
  std::string run_dir;
  std::vector<double> window;
  std::string taper;
};

int cmd_run(const RunArgs& a, const fs::path& root, std::ostream& out, std::ostream& err) {
  json doc = a.config_path.empty() ? json::object() : read_json_file(a.config_path);
  for (const auto& o : a.overrides) apply_override(doc, o);
  if (a.renormalize) doc["renormalize"] = true;
  const SystemConfig config = config_from_json(doc);
  const DerivedParams derived = derive(config);
  if (!a.dump_hamiltonian.empty()) {
    if (config.n_atoms > 3) throw ConfigError("--dump-hamiltonian supports n_atoms <= 3");
    write_dense_csv(a.dump_hamiltonian, to_dense(build_terms(config, derived), config.omega0));
  }
  RunOptions options{root, !a.no_resume, a.per_site};
  const RunManifest m = execute_run(config, options);
  out << "run: " << run_directory(root, m.hash).string() << '\n';
  if (!m.ok) {
    err << "numerical failure: " << m.error << '\n';
    return kNumericalFailure;
  }
  print_label(out, m);
  return kOk;
}

int cmd_sweep(const SweepArgs& a, int threads, const fs::path& root, std::ostream& out) {
  SweepSpec spec = load_sweep_spec(a.spec_path);
  for (const auto& o : a.overrides) apply_override(spec.base, o);
  RunOptions options{root, !a.no_resume, false};
  const auto manifests = execute_sweep(spec, threads, options);
  const auto rows = assemble_phase_diagram(manifests, root);
  char line[256];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%s  omega_R %7.3f kHz  eta_R %.4f  R/Rb %.3f  %-16s f %.4f kHz  %s\n",
                  r.hash.substr(0, 12).c_str(), r.omega_trap_R, r.eta_R, r.spacing_over_Rb,
                  std::string(to_string(r.label)).c_str(), r.dominant_freq, r.status.c_str());
    out << line;
  }
  out << "phase diagram: " << (root / "phase_diagram.csv").string() << '\n';
  const bool failed = std::any_of(manifests.begin(), manifests.end(), [](const RunManifest& m) { return !m.ok; });
  return failed ? kNumericalFailure : kOk;
}

// Re-analysis of a stored run; returns the analysis and the config used.
PhaseAnalysis reanalyze(const WindowArgs& a, SystemConfig& config) {
  const fs::path dir = a.run_dir;
  const RunManifest m = read_manifest(dir);
  json doc = m.config;
  if (!a.taper.empty()) doc["taper"] = a.taper;
  if (!a.window.empty()) doc["steady_window"] = a.window;
  config = config_from_json(doc);
  const TrajectoryRecord record = read_timeseries_csv((dir / "timeseries.csv").string());
  try {
    return analyze(record, config);
  } catch (const std::invalid_argument& e) {
    throw CsvError(std::string("cannot analyse timeseries.csv: ") + e.what());
  }
}

int cmd_spectrum(const WindowArgs& a, std::ostream& out) {
  SystemConfig config;
  const PhaseAnalysis an = reanalyze(a, config);
  const fs::path dir = a.run_dir;
  write_spectrum_csv((dir / "spectrum_internal.csv").string(), an.internal);
  write_spectrum_csv((dir / "spectrum_motional.csv").string(), an.motional);
  char line[160];
  std::snprintf(line, sizeof line, "window [%g, %g) T, resolution %.6f kHz, %zu samples\n", config.steady_window.lo,
                config.steady_window.hi, an.internal.resolution, an.internal.size());
  out << line;
  for (const Peak& p : an.peaks.peaks) {
    std::snprintf(line, sizeof line, "  peak %10.4f kHz  %.4f\n", p.freq, p.amp);
    out << line;
  }
  return kOk;
}

int cmd_classify(const WindowArgs& a, std::ostream& out) {
  SystemConfig config;
  const PhaseAnalysis an = reanalyze(a, config);
  RunManifest m = read_manifest(a.run_dir);
  m.label = an.label;
  print_label(out, m);
  return kOk;
}

int cmd_selftest(double dt, bool mutate, std::ostream& out) {
  selftest::Options options;
  options.dt_over_T = dt;
  if (mutate) options.mutate = selftest::flip_exchange_sign;
  const auto checks = selftest::run_all(options);
  selftest::print(out, checks);
  return selftest::all_passed(checks) ? kOk : kSelftestFailure;
}

struct App {
  CLI::App app{"Rydberg tweezer chain dynamics: RK4 evolution, spectra and phase classification", "rydtweezer"};
  int threads = std::max(1u, std::thread::hardware_concurrency());
  std::string output;
  RunArgs run;
  SweepArgs sweep;
  WindowArgs spectrum;
  WindowArgs classify;
  double selftest_dt = 1e-3;
  bool selftest_mutate = false;
  CLI::App* run_cmd = nullptr;
  CLI::App* sweep_cmd = nullptr;
  CLI::App* spectrum_cmd = nullptr;
  CLI::App* classify_cmd = nullptr;
  CLI::App* selftest_cmd = nullptr;

  App() {
    app.footer(key_table());
    app.require_subcommand(1);
    app.add_option("--threads", threads, "upper bound on concurrent runs")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", output, "output root (default $RYDTWEEZER_OUTPUT or ./rydtweezer-out)");

    run_cmd = app.add_subcommand("run", "evolve one configuration and write runs/<hash>/");
    run_cmd->add_option("config", run.config_path, "JSON configuration file");
    run_cmd->add_option("--set", run.overrides, "override a configuration key, key=value");
    run_cmd->add_flag("--renormalize", run.renormalize, "rescale to unit norm at every sample");
    run_cmd->add_flag("--per-site", run.per_site, "also write persite.csv");
    run_cmd->add_flag("--no-resume", run.no_resume, "recompute even if the run directory is complete");
    run_cmd->add_option("--dump-hamiltonian", run.dump_hamiltonian, "write H at full drive as CSV (n_atoms <= 3)");

    sweep_cmd = app.add_subcommand("sweep", "expand a sweep spec and run every grid point");
    sweep_cmd->add_option("spec", sweep.spec_path, "JSON sweep specification")->required();
    sweep_cmd->add_option("--set", sweep.overrides, "override a key of the base configuration, key=value");
    sweep_cmd->add_flag("--no-resume", sweep.no_resume, "recompute complete run directories");

    spectrum_cmd = app.add_subcommand("spectrum", "recompute the spectra of a stored run");
    classify_cmd = app.add_subcommand("classify", "reclassify a stored run");
    for (auto [cmd, args] : {std::pair{spectrum_cmd, &spectrum}, std::pair{classify_cmd, &classify}}) {
      cmd->add_option("run_dir", args->run_dir, "run directory containing manifest.json")->required();
      cmd->add_option("--window", args->window, "steady window lo hi, units of T")->expected(2);
      cmd->add_option("--taper", args->taper, "none or hann")->check(CLI::IsMember({"none", "hann"}));
    }

    selftest_cmd = app.add_subcommand("selftest", "oracle, Franck-Condon and closed-form Rabi checks at n <= 3");
    selftest_cmd->add_option("--dt", selftest_dt, "RK4 step of the integration checks, units of T")
        ->check(CLI::PositiveNumber);
    selftest_cmd->add_flag("--mutate-exchange", selftest_mutate, "flip the exchange-term sign (mutation check)");
  }
};

}  // namespace

std::string help_text() {
  App a;
  return a.app.help();
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  App a;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    a.app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return a.app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }
  const fs::path root = a.output.empty() ? default_output_root() : fs::path(a.output);
  try {
    if (*a.run_cmd) return cmd_run(a.run, root, out, err);
    if (*a.sweep_cmd) return cmd_sweep(a.sweep, a.threads, root, out);
    if (*a.spectrum_cmd) return cmd_spectrum(a.spectrum, out);
    if (*a.classify_cmd) return cmd_classify(a.classify, out);
    if (*a.selftest_cmd) return cmd_selftest(a.selftest_dt, a.selftest_mutate, out);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace rydtweezer::cli
