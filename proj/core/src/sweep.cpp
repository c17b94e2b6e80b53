#include "rydtweezer/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include <openssl/evp.h>

#include "rydtweezer/csv.hpp"

namespace rydtweezer {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kEtaPairKeys = {"eta_g", "eta_R"};
const std::set<std::string> kWavevectorKeys = {"laser_wavevector_k", "eta_reference", "eta_reference_omega_trap"};

std::string_view to_string(Linkage l) { return l == Linkage::LinkedByK ? "linked_by_k" : "free"; }

Linkage parse_linkage(const std::string& s) {
  if (s == "linked_by_k") return Linkage::LinkedByK;
  if (s == "free") return Linkage::Free;
  throw ConfigError("linkage must be \"linked_by_k\" or \"free\", got \"" + s + "\"");
}

std::string hex(const unsigned char* data, unsigned len) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

json diagnostics_json(const RunDiagnostics& d) {
  return json{{"steps", d.steps},
              {"max_norm_drift", d.max_norm_drift},
              {"final_norm_drift", d.final_norm_drift},
              {"max_energy_drift", d.max_energy_drift},
              {"energy_at_knee_khz", khz_from_angular(d.energy_at_knee)},
              {"hamiltonian_bound_khz", khz_from_angular(d.hamiltonian_bound)},
              {"warnings", d.warnings},
              {"flagged", d.flagged()}};
}

RunDiagnostics diagnostics_from_json(const json& j) {
  RunDiagnostics d;
  d.steps = j.at("steps").get<std::size_t>();
  d.max_norm_drift = j.at("max_norm_drift").get<double>();
  d.final_norm_drift = j.at("final_norm_drift").get<double>();
  d.max_energy_drift = j.at("max_energy_drift").get<double>();
  d.energy_at_knee = angular_from_khz(j.at("energy_at_knee_khz").get<double>());
  d.hamiltonian_bound = angular_from_khz(j.at("hamiltonian_bound_khz").get<double>());
  d.warnings = j.at("warnings").get<std::vector<std::string>>();
  return d;
}

json label_json(const PhaseLabel& l) {
  const PhaseDiagnostics& d = l.diagnostics;
  return json{{"label", to_string(l.kind)},
              {"motional_activity", d.motional_activity},
              {"drive_freq_khz", d.drive_freq},
              {"resolution_khz", d.resolution},
              {"peak_count", d.peak_count},
              {"companion_count", d.companion_count},
              {"dominant_freq_khz", d.dominant_freq},
              {"dominant_amp", d.dominant_amp},
              {"second_freq_khz", d.second_freq},
              {"second_amp", d.second_amp},
              {"peak_ratio", d.peak_ratio},
              {"frequency_ratio", d.frequency_ratio},
              {"best_rational", {d.best_rational.p, d.best_rational.q}},
              {"rational_error", d.rational_error},
              {"locked", d.locked}};
}

PhaseLabel label_from_json(const json& j) {
  PhaseLabel l;
  l.kind = phase_kind_from_string(j.at("label").get<std::string>());
  PhaseDiagnostics& d = l.diagnostics;
  d.motional_activity = j.at("motional_activity").get<double>();
  d.drive_freq = j.at("drive_freq_khz").get<double>();
  d.resolution = j.at("resolution_khz").get<double>();
  d.peak_count = j.at("peak_count").get<std::size_t>();
  d.companion_count = j.at("companion_count").get<std::size_t>();
  d.dominant_freq = j.at("dominant_freq_khz").get<double>();
  d.dominant_amp = j.at("dominant_amp").get<double>();
  d.second_freq = j.at("second_freq_khz").get<double>();
  d.second_amp = j.at("second_amp").get<double>();
  d.peak_ratio = j.at("peak_ratio").get<double>();
  d.frequency_ratio = j.at("frequency_ratio").get<double>();
  d.best_rational = {j.at("best_rational").at(0).get<long>(), j.at("best_rational").at(1).get<long>()};
  d.rational_error = j.at("rational_error").get<double>();
  d.locked = j.at("locked").get<bool>();
  return l;
}

fs::path unique_staging_dir(const fs::path& runs, const std::string& hash) {
  static std::atomic<unsigned long> counter{0};
  const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
  return runs / ("." + hash + ".tmp." + std::to_string(tid) + "." + std::to_string(counter++));
}

}  // namespace

SweepSpec SweepSpec::from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("sweep spec must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "base" && key != "linkage" && key != "axes") throw ConfigError("unknown sweep key '" + key + "'");
  SweepSpec spec;
  if (doc.contains("base")) {
    if (!doc["base"].is_object()) throw ConfigError("sweep base must be an object");
    spec.base = doc["base"];
  }
  if (doc.contains("linkage")) {
    if (!doc["linkage"].is_string()) throw ConfigError("linkage must be a string");
    spec.linkage = parse_linkage(doc["linkage"].get<std::string>());
  }
  if (!doc.contains("axes") || !doc["axes"].is_array()) throw ConfigError("sweep spec needs an \"axes\" array");
  for (const auto& a : doc["axes"]) {
    if (!a.is_object() || !a.contains("name") || !a.contains("values") || !a["name"].is_string() ||
        !a["values"].is_array())
      throw ConfigError("each axis needs a string \"name\" and a \"values\" array");
    SweepAxis axis{a["name"].get<std::string>(), {}};
    for (const auto& v : a["values"]) axis.values.push_back(v);
    spec.axes.push_back(std::move(axis));
  }
  return spec;
}

json SweepSpec::to_json() const {
  json axes_json = json::array();
  for (const auto& a : axes) axes_json.push_back({{"name", a.name}, {"values", a.values}});
  return json{{"base", base}, {"linkage", to_string(linkage)}, {"axes", axes_json}};
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("malformed sweep spec '" + path + "': " + e.what());
  }
  return SweepSpec::from_json(doc);
}

std::vector<SystemConfig> expand_grid(const SweepSpec& spec) {
  if (spec.axes.empty()) throw ConfigError("sweep needs at least one axis");
  std::set<std::string> names;
  for (const auto& a : spec.axes) {
    if (!names.insert(a.name).second) throw ConfigError("axis '" + a.name + "' appears twice");
    if (spec.linkage == Linkage::LinkedByK && kEtaPairKeys.contains(a.name))
      throw ConfigError("linked_by_k sweeps derive eta from k; '" + a.name + "' cannot be an axis");
    if (spec.linkage == Linkage::Free && kWavevectorKeys.contains(a.name))
      throw ConfigError("free sweeps take explicit eta values; '" + a.name + "' cannot be an axis");
  }

  json base = spec.base;
  if (spec.linkage == Linkage::LinkedByK) {
    for (const auto& k : kEtaPairKeys)
      if (base.contains(k)) throw ConfigError("linked_by_k base must not set '" + k + "'");
    const bool has_k = base.contains("laser_wavevector_k") || names.contains("laser_wavevector_k");
    const bool has_ref = base.contains("eta_reference") || names.contains("eta_reference");
    if (!has_k && !has_ref) throw ConfigError("linked_by_k needs laser_wavevector_k or eta_reference");
    // Pin the reference trap so that an omega_trap_g axis does not move k.
    if (has_ref && !base.contains("eta_reference_omega_trap") && !names.contains("eta_reference_omega_trap"))
      base["eta_reference_omega_trap"] = base.value("omega_trap_g", khz_from_angular(SystemConfig{}.omega_trap_g));
  } else {
    for (const auto& k : kWavevectorKeys)
      if (base.contains(k)) throw ConfigError("free sweep base must not set '" + k + "'");
  }

  std::size_t total = 1;
  for (const auto& a : spec.axes) total *= a.values.size();
  std::vector<SystemConfig> configs;
  configs.reserve(total);
  std::vector<std::size_t> idx(spec.axes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    json doc = base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      const std::string& name = spec.axes[a].name;
      // Keep the linkage-mode keys; only same-family conflicts are dropped.
      doc[name] = spec.axes[a].values[idx[a]];
      if (name == "spacing_R") doc.erase("spacing_over_Rb");
      if (name == "spacing_over_Rb") doc.erase("spacing_R");
    }
    configs.push_back(config_from_json(doc));
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      if (++idx[a] < spec.axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return configs;
}

std::string config_hash(const SystemConfig& config) {
  const std::string body = to_json(config).dump();
  const std::string blob = "blob " + std::to_string(body.size()) + std::string(1, '\0') + body;
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  return hex(md, len);
}

json RunManifest::to_json() const {
  json peaks_json = json::array();
  for (const Peak& p : peaks.peaks) peaks_json.push_back({p.freq, p.amp});
  return json{{"hash", hash},
              {"config", config},
              {"derived", derived},
              {"diagnostics", diagnostics_json(diagnostics)},
              {"classification", label_json(label)},
              {"peaks", peaks_json},
              {"outputs", outputs},
              {"wall_time_s", wall_time_s},
              {"status", ok ? "ok" : "failed"},
              {"error", error}};
}

RunManifest RunManifest::from_json(const json& doc) {
  try {
    RunManifest m;
    m.hash = doc.at("hash").get<std::string>();
    m.config = doc.at("config");
    m.derived = doc.at("derived");
    m.diagnostics = diagnostics_from_json(doc.at("diagnostics"));
    m.label = label_from_json(doc.at("classification"));
    for (const auto& p : doc.at("peaks")) m.peaks.peaks.push_back({p.at(0).get<double>(), p.at(1).get<double>(), 0});
    m.outputs = doc.at("outputs").get<std::map<std::string, std::string>>();
    m.wall_time_s = doc.at("wall_time_s").get<double>();
    m.ok = doc.at("status").get<std::string>() == "ok";
    m.error = doc.at("error").get<std::string>();
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

fs::path default_output_root() {
  if (const char* env = std::getenv("RYDTWEEZER_OUTPUT"); env && *env) return env;
  return "rydtweezer-out";
}

fs::path run_directory(const fs::path& root, const std::string& hash) { return root / "runs" / hash; }

void write_manifest(const fs::path& run_dir, const RunManifest& manifest) {
  std::ofstream out(run_dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write manifest in " + run_dir.string());
  out << manifest.to_json().dump(2) << '\n';
}

RunManifest read_manifest(const fs::path& run_dir) {
  std::ifstream in(run_dir / "manifest.json");
  if (!in) throw ConfigError("no manifest.json in " + run_dir.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("malformed manifest in " + run_dir.string() + ": " + e.what());
  }
  return RunManifest::from_json(doc);
}

void write_run_outputs(const fs::path& dir, RunManifest& manifest, const RunResult& result,
                       const PhaseAnalysis& analysis, bool per_site) {
  fs::create_directories(dir);
  manifest.outputs = {{"manifest", "manifest.json"},
                      {"timeseries", "timeseries.csv"},
                      {"spectrum_internal", "spectrum_internal.csv"},
                      {"spectrum_motional", "spectrum_motional.csv"},
                      {"phasespace", "phasespace.csv"}};
  write_timeseries_csv((dir / "timeseries.csv").string(), result.record);
  write_spectrum_csv((dir / "spectrum_internal.csv").string(), analysis.internal);
  write_spectrum_csv((dir / "spectrum_motional.csv").string(), analysis.motional);
  write_phasespace_csv((dir / "phasespace.csv").string(), result.record);
  if (per_site && !result.record.per_site.empty()) {
    write_per_site_csv((dir / "persite.csv").string(), result.record);
    manifest.outputs["per_site"] = "persite.csv";
  }
  write_manifest(dir, manifest);
}

RunManifest execute_run(const SystemConfig& config, const RunOptions& options) {
  const std::string hash = config_hash(config);
  const fs::path runs = options.output_root / "runs";
  const fs::path dir = run_directory(options.output_root, hash);
  if (options.resume && fs::exists(dir / "manifest.json")) {
    try {
      RunManifest previous = read_manifest(dir);
      const bool complete = previous.ok && std::all_of(previous.outputs.begin(), previous.outputs.end(),
                                                       [&](const auto& kv) { return fs::exists(dir / kv.second); });
      if (complete && previous.hash == hash) return previous;
    } catch (const std::exception&) {
      // An unreadable manifest is treated as an incomplete run.
    }
  }

  RunManifest manifest;
  manifest.hash = hash;
  manifest.config = to_json(config);
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(runs);
  const fs::path staging = unique_staging_dir(runs, hash);
  try {
    const DerivedParams derived = derive(config);
    manifest.derived = to_json(derived);
    const Hamiltonian hamiltonian(config, derived);
    EvolutionPlan plan = EvolutionPlan::from_config(config);
    plan.per_site = options.per_site;
    const RunResult result = evolve(hamiltonian, plan, initial_state(config.n_atoms));
    const PhaseAnalysis analysis = analyze(result.record, config);
    manifest.diagnostics = result.diagnostics;
    manifest.label = analysis.label;
    manifest.peaks = analysis.peaks;
    manifest.ok = true;
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_run_outputs(staging, manifest, result, analysis, options.per_site);
  } catch (const std::exception& e) {
    manifest.ok = false;
    manifest.error = e.what();
    manifest.outputs = {{"manifest", "manifest.json"}};
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fs::remove_all(staging);
    fs::create_directories(staging);
    write_manifest(staging, manifest);
  }
  fs::remove_all(dir);
  fs::rename(staging, dir);
  return manifest;
}

std::vector<RunManifest> execute_sweep(const SweepSpec& spec, int parallelism, const RunOptions& options) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  const std::vector<SystemConfig> configs = expand_grid(spec);
  std::vector<std::string> hashes;
  for (const auto& c : configs) hashes.push_back(config_hash(c));
  // Identical grid points share one run directory and one execution.
  std::vector<std::size_t> unique;
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < configs.size(); ++i)
      if (seen.insert(hashes[i]).second) unique.push_back(i);
  }

  std::vector<RunManifest> by_index(configs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t u; (u = next++) < unique.size();) {
      const std::size_t i = unique[u];
      by_index[i] = execute_run(configs[i], options);
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(parallelism), unique.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  if (n_threads > 0) worker();
  for (auto& th : pool) th.join();

  std::vector<RunManifest> manifests(configs.size());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const auto it = std::find(hashes.begin(), hashes.end(), hashes[i]);
    manifests[i] = by_index[static_cast<std::size_t>(it - hashes.begin())];
  }

  fs::create_directories(options.output_root);
  json index{{"spec", spec.to_json()}, {"runs", json::array()}};
  for (const auto& m : manifests)
    index["runs"].push_back({{"hash", m.hash}, {"label", to_string(m.label.kind)}, {"status", m.ok ? "ok" : "failed"}});
  std::ofstream(options.output_root / "index.json", std::ios::binary | std::ios::trunc) << index.dump(2) << '\n';
  write_phase_diagram_csv((options.output_root / "phase_diagram.csv").string(),
                          assemble_phase_diagram(manifests, options.output_root));
  return manifests;
}

std::vector<PhaseDiagramRow> assemble_phase_diagram(const std::vector<RunManifest>& manifests, const fs::path& root) {
  std::vector<PhaseDiagramRow> rows;
  if (manifests.empty()) return rows;
  const json window = manifests.front().config.at("steady_window");
  for (const auto& m : manifests) {
    if (m.config.at("steady_window") != window)
      throw std::invalid_argument("manifests use different steady windows");
    PhaseDiagramRow row;
    row.hash = m.hash;
    row.omega_trap_R = m.config.at("omega_trap_R").get<double>();
    if (m.derived.is_object()) {
      row.eta_R = m.derived.value("eta_R", 0.0);
      row.spacing_over_Rb = m.derived.value("spacing_over_Rb", 0.0);
    }
    row.label = m.label.kind;
    row.dominant_freq = m.label.diagnostics.dominant_freq;
    row.peak_ratio = m.label.diagnostics.peak_ratio;
    const auto spectrum = m.outputs.find("spectrum_internal");
    if (!m.ok)
      row.status = "failed";
    else if (spectrum == m.outputs.end() || !fs::exists(run_directory(root, m.hash) / spectrum->second))
      row.status = "missing_spectrum";
    else if (m.diagnostics.flagged())
      row.status = "flagged";
    rows.push_back(row);
  }
  return rows;
}

void write_phase_diagram_csv(const std::string& path, const std::vector<PhaseDiagramRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("cannot write '" + path + "'");
  out << "hash,omega_trap_R_khz,eta_R,spacing_over_Rb,label,dominant_freq_khz,peak_ratio,status\n";
  for (const auto& r : rows)
    out << r.hash << ',' << format_double(r.omega_trap_R) << ',' << format_double(r.eta_R) << ','
        << format_double(r.spacing_over_Rb) << ',' << to_string(r.label) << ',' << format_double(r.dominant_freq)
        << ',' << format_double(r.peak_ratio) << ',' << r.status << '\n';
}

}  // namespace rydtweezer
