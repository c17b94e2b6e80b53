#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydtweezer/config.hpp"
#include "rydtweezer/evolve.hpp"
#include "rydtweezer/spectral.hpp"

namespace rydtweezer {

enum class Linkage {
  LinkedByK,  // one laser wavevector; eta_g, eta_R follow from each trap frequency
  Free,       // explicit (eta_g, eta_R) at every grid point
};

struct SweepAxis {
  std::string name;  // any config key
  std::vector<nlohmann::json> values;
};

/// {"base": {...}, "linkage": "linked_by_k" | "free", "axes": [{"name": ..., "values": [...]}]}
struct SweepSpec {
  nlohmann::json base = nlohmann::json::object();
  Linkage linkage = Linkage::LinkedByK;
  std::vector<SweepAxis> axes;

  static SweepSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

SweepSpec load_sweep_spec(const std::string& path);

/// Cartesian product of the axes applied to the base document, in row-major
/// order (last axis fastest). Throws ConfigError on conflicting axes/linkage.
std::vector<SystemConfig> expand_grid(const SweepSpec& spec);

/// Git-blob SHA-1 of the canonical JSON form of the configuration.
std::string config_hash(const SystemConfig& config);

struct RunManifest {
  std::string hash;
  nlohmann::json config;
  nlohmann::json derived;
  RunDiagnostics diagnostics;
  PhaseLabel label;
  PeakList peaks;  // significant internal peaks; bins are not stored
  std::map<std::string, std::string> outputs;  // role -> file name inside the run directory
  double wall_time_s = 0.0;
  bool ok = false;
  std::string error;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& doc);
};

struct RunOptions {
  std::filesystem::path output_root = ".";
  bool resume = true;      // reuse a complete runs/<hash>/ directory
  bool per_site = false;   // also write persite.csv
};

/// Default output root: $RYDTWEEZER_OUTPUT when set, otherwise "rydtweezer-out".
std::filesystem::path default_output_root();

std::filesystem::path run_directory(const std::filesystem::path& root, const std::string& hash);

/// Runs one configuration and persists runs/<hash>/. Numerical failures are
/// recorded in the manifest (ok = false) rather than thrown.
RunManifest execute_run(const SystemConfig& config, const RunOptions& options);

/// Writes manifest.json, timeseries.csv, spectrum_internal.csv,
/// spectrum_motional.csv and phasespace.csv into `dir`.
void write_run_outputs(const std::filesystem::path& dir, RunManifest& manifest, const RunResult& result,
                       const PhaseAnalysis& analysis, bool per_site);

RunManifest read_manifest(const std::filesystem::path& run_dir);
void write_manifest(const std::filesystem::path& run_dir, const RunManifest& manifest);

/// Runs every grid point on at most `parallelism` worker threads. Results are
/// in grid order. Writes index.json and phase_diagram.csv at the output root
/// once all workers are done.
std::vector<RunManifest> execute_sweep(const SweepSpec& spec, int parallelism, const RunOptions& options);

struct PhaseDiagramRow {
  std::string hash;
  double omega_trap_R = 0.0;  // kHz
  double eta_R = 0.0;
  double spacing_over_Rb = 0.0;
  PhaseKind label = PhaseKind::Unclassified;
  double dominant_freq = 0.0;  // kHz
  double peak_ratio = 0.0;
  std::string status = "ok";   // ok | flagged | failed | missing_spectrum
};

/// One row per manifest. Throws std::invalid_argument when the manifests do
/// not share one steady window. `root` locates the run directories used to
/// check that the spectrum files exist.
std::vector<PhaseDiagramRow> assemble_phase_diagram(const std::vector<RunManifest>& manifests,
                                                    const std::filesystem::path& root);

void write_phase_diagram_csv(const std::string& path, const std::vector<PhaseDiagramRow>& rows);

}  // namespace rydtweezer
