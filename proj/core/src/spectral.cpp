#include "rydtweezer/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rydtweezer {

SpectrumResult dft(std::span<const double> series, std::span<const double> times, TimeWindow window, double period,
                   Taper taper) {
  if (series.size() != times.size()) throw std::invalid_argument("series and times differ in length");
  if (!(period > 0.0)) throw std::invalid_argument("period must be positive");
  const auto [first, last] = window_range(times, window);
  const std::size_t n = last - first;
  if (n < kMinSpectrumSamples)
    throw std::invalid_argument("window holds " + std::to_string(n) + " samples, need at least " +
                                std::to_string(kMinSpectrumSamples));
  const double step = (times[last - 1] - times[first]) / static_cast<double>(n - 1);
  for (std::size_t i = first + 1; i < last; ++i)
    if (std::abs(times[i] - times[i - 1] - step) > 1e-6 * step)
      throw std::invalid_argument("non-uniform sampling at t/T = " + std::to_string(times[i]));

  std::vector<double> x(series.begin() + static_cast<std::ptrdiff_t>(first),
                        series.begin() + static_cast<std::ptrdiff_t>(last));
  // Two passes: the second removes the rounding left by the first.
  for (int pass = 0; pass < 2; ++pass) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : x) v -= mean;
  }
  if (taper == Taper::Hann)
    for (std::size_t i = 0; i < n; ++i) x[i] *= 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / n));

  std::vector<double> cos_table(n), sin_table(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    cos_table[i] = std::cos(phase);
    sin_table[i] = std::sin(phase);
  }

  SpectrumResult out;
  out.window = window;
  out.taper = taper;
  const double span_seconds = static_cast<double>(n) * step * period;
  out.resolution = 1e-3 / span_seconds;
  out.freqs.resize(n);
  out.raw.resize(n);
  const long half = static_cast<long>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    const long k = static_cast<long>(j) - half;
    const std::size_t kk = static_cast<std::size_t>((k % static_cast<long>(n) + static_cast<long>(n))) % n;
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t m = 0; m < n; ++m) {
      re += x[m] * cos_table[idx];
      im -= x[m] * sin_table[idx];
      idx += kk;
      if (idx >= n) idx -= n;
    }
    out.freqs[j] = static_cast<double>(k) * out.resolution;
    out.raw[j] = std::hypot(re, im) / static_cast<double>(n);
  }
  out.max_raw = *std::max_element(out.raw.begin(), out.raw.end());
  out.amps.assign(n, 0.0);
  // Anything at the rounding level of the mean subtraction counts as constant.
  double scale = 0.0;
  for (double v : series.subspan(first, n)) scale = std::max(scale, std::abs(v));
  if (out.max_raw > 1e-14 * std::max(scale, 1e-300))
    for (std::size_t j = 0; j < n; ++j) out.amps[j] = out.raw[j] / out.max_raw;
  return out;
}

PeakList find_peaks(const SpectrumResult& spectrum, double significance) {
  const std::size_t n = spectrum.size();
  std::vector<Peak> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    if (spectrum.freqs[j] < 0.0) continue;
    const double a = spectrum.amps[j];
    if (a < significance || a <= 0.0) continue;
    const bool left = j == 0 || a > spectrum.amps[j - 1];
    const bool right = j + 1 == n || a > spectrum.amps[j + 1];
    if (left && right) candidates.push_back({spectrum.freqs[j], a, j});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) { return a.amp > b.amp; });
  PeakList list;
  for (const Peak& c : candidates) {
    const bool crowded = std::any_of(list.peaks.begin(), list.peaks.end(), [&](const Peak& p) {
      return (c.bin > p.bin ? c.bin - p.bin : p.bin - c.bin) < 2;
    });
    if (!crowded) list.peaks.push_back(c);
  }
  return list;
}

std::string_view to_string(PhaseKind kind) {
  switch (kind) {
    case PhaseKind::RabiOscillation: return "RabiOscillation";
    case PhaseKind::LimitCycle: return "LimitCycle";
    case PhaseKind::LimitTorus: return "LimitTorus";
    case PhaseKind::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

PhaseKind phase_kind_from_string(std::string_view name) {
  for (PhaseKind k : {PhaseKind::RabiOscillation, PhaseKind::LimitCycle, PhaseKind::LimitTorus, PhaseKind::Unclassified})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown phase label '" + std::string(name) + "'");
}

std::vector<Rational> convergents(double x, int max_denominator) {
  if (!std::isfinite(x) || x < 0.0) throw std::invalid_argument("convergents need a finite x >= 0");
  std::vector<Rational> out;
  long h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(rest);
    if (a_real > 1e15) break;
    const long a = static_cast<long>(a_real);
    const long h = a * h_prev + h_prev2;
    const long k = a * k_prev + k_prev2;
    if (k > max_denominator) break;
    out.push_back({h, k});
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = rest - a_real;
    if (frac < 1e-12) break;
    rest = 1.0 / frac;
  }
  return out;
}

PhaseLabel classify(const SpectrumResult& internal, const SpectrumResult& motional, const PeakList& peaks,
                    const AnalysisOptions& options, double omega0) {
  PhaseLabel label;
  PhaseDiagnostics& d = label.diagnostics;
  d.motional_activity = motional.max_raw;
  d.drive_freq = khz_from_angular(omega0);
  d.resolution = internal.resolution;
  d.peak_count = peaks.size();
  if (peaks.empty()) return label;

  const Peak& top = peaks.peaks.front();
  d.dominant_freq = top.freq;
  d.dominant_amp = top.amp;
  d.companion_count = static_cast<std::size_t>(std::count_if(
      peaks.peaks.begin(), peaks.peaks.end(), [&](const Peak& p) { return p.amp >= options.companion_ratio * top.amp; }));
  if (peaks.size() >= 2) {
    const Peak& second = peaks.peaks[1];
    d.second_freq = second.freq;
    d.second_amp = second.amp;
    d.peak_ratio = second.amp / top.amp;
    const double lo = std::min(top.freq, second.freq);
    const double hi = std::max(top.freq, second.freq);
    d.frequency_ratio = hi > 0.0 ? lo / hi : 0.0;
    d.rational_error = 1.0;
    for (const Rational& r : convergents(d.frequency_ratio, options.max_denominator)) {
      const double err = std::abs(d.frequency_ratio - static_cast<double>(r.p) / static_cast<double>(r.q));
      if (err <= d.rational_error) {
        d.rational_error = err;
        d.best_rational = r;
      }
    }
    d.locked = d.rational_error < options.ratio_tolerance;
  }

  const bool single = d.companion_count == 1;
  if (d.motional_activity < options.epsilon_m && single &&
      std::abs(top.freq - d.drive_freq) <= internal.resolution * (1.0 + 1e-9)) {
    label.kind = PhaseKind::RabiOscillation;
  } else if (peaks.size() < 2 || d.peak_ratio < options.companion_ratio) {
    label.kind = PhaseKind::LimitCycle;
  } else if (!d.locked) {
    label.kind = PhaseKind::LimitTorus;
  }
  return label;
}

PhaseAnalysis analyze(const TrajectoryRecord& record, const SystemConfig& config) {
  return analyze(record, config, config.steady_window);
}

PhaseAnalysis analyze(const TrajectoryRecord& record, const SystemConfig& config, TimeWindow window) {
  const double period = kTwoPi / config.omega0;
  PhaseAnalysis a;
  a.internal = dft(record.tau_z, record.times, window, period, config.analysis.taper);
  a.motional = dft(record.sigma_z, record.times, window, period, config.analysis.taper);
  a.peaks = find_peaks(a.internal, config.analysis.significance);
  a.label = classify(a.internal, a.motional, a.peaks, config.analysis, config.omega0);
  return a;
}

}  // namespace rydtweezer
