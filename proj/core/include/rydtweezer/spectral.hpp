#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "rydtweezer/config.hpp"
#include "rydtweezer/observables.hpp"

namespace rydtweezer {

/// Two-sided spectrum, frequencies ordered from -N/2 to N/2 - 1 bins.
struct SpectrumResult {
  std::vector<double> freqs;  // kHz
  std::vector<double> amps;   // max-normalised to 1 (all zero for a constant series)
  std::vector<double> raw;    // |X_k| / N before normalisation
  TimeWindow window;
  bool mean_removed = true;
  Taper taper = Taper::None;
  double resolution = 0.0;    // kHz, 1 / window length
  double max_raw = 0.0;

  std::size_t size() const { return freqs.size(); }
};

inline constexpr std::size_t kMinSpectrumSamples = kMinWindowSamples;

/// Mean-removed DFT of the samples with window.lo <= t < window.hi.
/// `times` are in units of the period T (seconds). Throws std::invalid_argument
/// on non-uniform sampling or fewer than kMinSpectrumSamples samples.
SpectrumResult dft(std::span<const double> series, std::span<const double> times, TimeWindow window, double period,
                   Taper taper = Taper::None);

struct Peak {
  double freq = 0.0;  // kHz
  double amp = 0.0;
  std::size_t bin = 0;  // index into SpectrumResult::freqs
};

/// Descending amplitude, f >= 0 only.
struct PeakList {
  std::vector<Peak> peaks;

  bool empty() const { return peaks.empty(); }
  std::size_t size() const { return peaks.size(); }
};

/// Strict local maxima of the f >= 0 half with amplitude >= significance,
/// thinned so that kept peaks are at least two bins apart.
PeakList find_peaks(const SpectrumResult& spectrum, double significance = 0.05);

enum class PhaseKind { RabiOscillation, LimitCycle, LimitTorus, Unclassified };

std::string_view to_string(PhaseKind kind);
PhaseKind phase_kind_from_string(std::string_view name);

struct Rational {
  long p = 0;
  long q = 1;
};

/// Continued-fraction convergents of x with denominator <= max_denominator.
std::vector<Rational> convergents(double x, int max_denominator);

struct PhaseDiagnostics {
  double motional_activity = 0.0;  // max raw amplitude of the motional spectrum
  double drive_freq = 0.0;         // Omega0 / 2 pi, kHz
  double resolution = 0.0;         // kHz
  std::size_t peak_count = 0;      // peaks above the significance floor
  std::size_t companion_count = 0; // peaks with amp >= companion_ratio * dominant
  double dominant_freq = 0.0;
  double dominant_amp = 0.0;
  double second_freq = 0.0;
  double second_amp = 0.0;
  double peak_ratio = 0.0;         // second / dominant amplitude
  double frequency_ratio = 0.0;    // min / max of the two leading frequencies
  Rational best_rational;          // closest convergent with q <= max_denominator
  double rational_error = 0.0;
  bool locked = false;             // a convergent lies within ratio_tolerance
};

struct PhaseLabel {
  PhaseKind kind = PhaseKind::Unclassified;
  PhaseDiagnostics diagnostics;
};

/// Decision rule, in order:
///   RabiOscillation  motional activity < epsilon_m, one companion-level peak,
///                    within one bin of the drive frequency;
///   LimitCycle       no second peak above companion_ratio of the first;
///   LimitTorus       two leading frequencies with no convergent p/q (q <= max
///                    denominator) within ratio_tolerance of their ratio;
///   Unclassified     otherwise.
PhaseLabel classify(const SpectrumResult& internal, const SpectrumResult& motional, const PeakList& peaks,
                    const AnalysisOptions& options, double omega0);

/// Spectra, peaks and label of one trajectory over the configured steady
/// window: tau_z is the internal series, sigma_z the motional one.
struct PhaseAnalysis {
  SpectrumResult internal;
  SpectrumResult motional;
  PeakList peaks;
  PhaseLabel label;
};

PhaseAnalysis analyze(const TrajectoryRecord& record, const SystemConfig& config);
PhaseAnalysis analyze(const TrajectoryRecord& record, const SystemConfig& config, TimeWindow window);

}  // namespace rydtweezer
