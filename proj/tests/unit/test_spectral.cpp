#include <doctest.h>

#include <cmath>
#include <random>

#include "rydtweezer/spectral.hpp"

using namespace rydtweezer;

namespace {

constexpr double kPeriod = 1e-4;  // T for a 10 kHz drive
constexpr TimeWindow kWindow{160.0, 200.0};

struct Tone {
  double khz;
  double amp;
  double phase = 0.0;
};

struct Series {
  std::vector<double> t;
  std::vector<double> x;
};

Series tones(std::initializer_list<Tone> list, double offset = 0.3, double dt = 0.01) {
  Series s;
  for (int k = 0; k <= 20000; ++k) {
    const double t = k * dt;
    double v = offset;
    for (const Tone& tone : list) v += tone.amp * std::cos(kTwoPi * tone.khz * 1e3 * t * kPeriod + tone.phase);
    s.t.push_back(t);
    s.x.push_back(v);
  }
  return s;
}

SpectrumResult spectrum(const Series& s, Taper taper = Taper::None) { return dft(s.x, s.t, kWindow, kPeriod, taper); }

PhaseLabel label_of(const Series& internal, const Series& motional, AnalysisOptions options = {}) {
  const SpectrumResult a = spectrum(internal), b = spectrum(motional);
  return classify(a, b, find_peaks(a, options.significance), options, angular_from_khz(10.0));
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("window of 40 T gives 4000 samples and 0.25 kHz bins") {
  const SpectrumResult s = spectrum(tones({{10.0, 1.0}}));
  CHECK(s.size() == 4000);
  CHECK(s.resolution == doctest::Approx(0.25));
  CHECK(s.freqs.front() == doctest::Approx(-2000 * 0.25));
  CHECK(s.freqs[2000] == 0.0);
  CHECK(s.window == kWindow);
}

TEST_CASE("a pure tone peaks at its frequency") {
  const SpectrumResult s = spectrum(tones({{10.0, 0.7}}));
  const PeakList p = find_peaks(s);
  REQUIRE(p.size() == 1);
  CHECK(p.peaks[0].freq == doctest::Approx(10.0));
  CHECK(p.peaks[0].amp == doctest::Approx(1.0));
  CHECK(s.max_raw == doctest::Approx(0.35).epsilon(1e-10));
  CHECK(s.amps[2000] < 1e-12);  // mean removed
}

TEST_CASE("constant series has no peaks") {
  Series s = tones({}, 0.8);
  const SpectrumResult sp = spectrum(s);
  for (double a : sp.amps) CHECK(a == 0.0);
  CHECK(find_peaks(sp).empty());
}

TEST_CASE("input checks") {
  Series s = tones({{10.0, 1.0}});
  CHECK_THROWS_AS(dft(s.x, s.t, {199.9, 200.0}, kPeriod), std::invalid_argument);
  s.t[17000] += 0.003;
  CHECK_THROWS_AS(spectrum(s), std::invalid_argument);
  s.x.pop_back();
  CHECK_THROWS_AS(spectrum(s), std::invalid_argument);
}

TEST_CASE("Parseval") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> g;
  Series s;
  for (int k = 0; k <= 20000; ++k) {
    s.t.push_back(k * 0.01);
    s.x.push_back(g(rng));
  }
  const SpectrumResult sp = spectrum(s);
  const std::size_t first = 16000, n = 4000;
  double mean = 0.0;
  for (std::size_t i = first; i < first + n; ++i) mean += s.x[i];
  mean /= n;
  double energy = 0.0;
  for (std::size_t i = first; i < first + n; ++i) energy += (s.x[i] - mean) * (s.x[i] - mean);
  double spectral = 0.0;
  for (double r : sp.raw) spectral += r * r * n;
  CHECK(std::abs(energy - spectral) / energy < 1e-10);
}

TEST_CASE("random on-grid tones are recovered") {
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<int> bin(4, 120);
  std::uniform_real_distribution<double> amp(0.05, 2.0), phase(0.0, kTwoPi);
  for (int trial = 0; trial < 100; ++trial) {
    const double f = bin(rng) * 0.25;
    const SpectrumResult sp = spectrum(tones({{f, amp(rng), phase(rng)}}));
    const PeakList p = find_peaks(sp);
    REQUIRE(!p.empty());
    CHECK(p.peaks[0].freq == doctest::Approx(f));
    CHECK(p.size() == 1);
  }
}

TEST_CASE("random off-grid tones land within half a bin") {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> f(1.0, 30.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double khz = f(rng);
    const PeakList p = find_peaks(spectrum(tones({{khz, 1.0, 0.4}})));
    REQUIRE(!p.empty());
    // Leakage from the negative-frequency image can tip a tone sitting at a bin
    // midpoint into the farther bin.
    CHECK(std::abs(p.peaks[0].freq - khz) <= 0.5 * 0.25 * 1.01);
  }
}

TEST_CASE("Hann taper suppresses leakage") {
  const Series s = tones({{10.125, 1.0}});
  const SpectrumResult plain = spectrum(s), hann = spectrum(s, Taper::Hann);
  CHECK(hann.taper == Taper::Hann);
  // Amplitude 5 kHz away from the line.
  const std::size_t far = 2000 + 60;
  CHECK(hann.amps[far] < 0.05 * plain.amps[far]);
}

TEST_CASE("peak picking") {
  const SpectrumResult sp = spectrum(tones({{9.5, 1.0}, {10.5, 0.45}, {3.0, 0.02}}));
  const PeakList p = find_peaks(sp);
  REQUIRE(p.size() == 2);
  CHECK(p.peaks[0].freq == doctest::Approx(9.5));
  CHECK(p.peaks[1].freq == doctest::Approx(10.5));
  CHECK(p.peaks[1].amp == doctest::Approx(0.45));
  CHECK(find_peaks(sp, 0.01).size() == 3);
  for (const Peak& pk : find_peaks(sp, 0.001).peaks) CHECK(pk.freq >= 0.0);

  // Two neighbouring bins: only the larger survives.
  const PeakList close = find_peaks(spectrum(tones({{10.0, 1.0}, {10.25, 0.9}})), 0.05);
  REQUIRE(!close.empty());
  CHECK(close.peaks[0].freq == doctest::Approx(10.0));
  for (std::size_t i = 1; i < close.size(); ++i) CHECK(std::abs(close.peaks[i].freq - 10.0) > 0.25 * 1.5);
}

TEST_CASE("convergents") {
  const auto pi = convergents(std::numbers::pi, 200);
  REQUIRE(pi.size() >= 3);
  CHECK(pi[0].p == 3);
  CHECK(pi[1].p == 22);
  CHECK(pi[1].q == 7);
  CHECK(pi[2].p == 333);
  CHECK(pi.back().q <= 200);
  const auto half = convergents(0.5, 8);
  CHECK(half.back().p == 1);
  CHECK(half.back().q == 2);
  CHECK_THROWS_AS(convergents(-1.0, 8), std::invalid_argument);
}

TEST_CASE("phase names") {
  for (PhaseKind k : {PhaseKind::RabiOscillation, PhaseKind::LimitCycle, PhaseKind::LimitTorus, PhaseKind::Unclassified})
    CHECK(phase_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(phase_kind_from_string("Chaos"), std::invalid_argument);
}

TEST_CASE("classification of synthetic spectra") {
  const Series silent = tones({}, -1.0);
  const Series moving = tones({{0.5, 0.2}}, -0.8);

  SUBCASE("drive line with silent motion") {
    const PhaseLabel l = label_of(tones({{10.0, 1.0}}), silent);
    CHECK(l.kind == PhaseKind::RabiOscillation);
    CHECK(l.diagnostics.motional_activity == 0.0);
    CHECK(l.diagnostics.companion_count == 1);
  }
  SUBCASE("drive line with moving traps") {
    CHECK(label_of(tones({{10.0, 1.0}}), moving).kind == PhaseKind::LimitCycle);
  }
  SUBCASE("single line away from the drive") {
    const PhaseLabel l = label_of(tones({{11.5, 1.0}}), moving);
    CHECK(l.kind == PhaseKind::LimitCycle);
    CHECK(l.diagnostics.dominant_freq == doctest::Approx(11.5));
  }
  SUBCASE("weak companion still counts as one line") {
    CHECK(label_of(tones({{11.5, 1.0}, {9.0, 0.15}}), moving).kind == PhaseKind::LimitCycle);
  }
  SUBCASE("two incommensurate lines") {
    const PhaseLabel l = label_of(tones({{9.5, 1.0}, {10.5, 0.45}}), moving);
    CHECK(l.kind == PhaseKind::LimitTorus);
    CHECK(l.diagnostics.frequency_ratio == doctest::Approx(9.5 / 10.5));
    CHECK(l.diagnostics.best_rational.p == 1);
    CHECK(l.diagnostics.best_rational.q == 1);
    CHECK_FALSE(l.diagnostics.locked);
  }
  SUBCASE("two locked lines") {
    const PhaseLabel l = label_of(tones({{10.0, 1.0}, {5.0, 0.6}}), moving);
    CHECK(l.kind == PhaseKind::Unclassified);
    CHECK(l.diagnostics.locked);
    CHECK(l.diagnostics.best_rational.q == 2);
  }
  SUBCASE("no lines: a static state is not a cycle") {
    const PhaseLabel l = label_of(silent, silent);
    CHECK(l.kind == PhaseKind::Unclassified);
    CHECK(l.diagnostics.peak_count == 0);
  }
}

TEST_CASE("labels are invariant under rescaling both series") {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  const Series a = tones({{9.5, 1.0}, {10.5, 0.45}}), b = tones({{0.5, 0.2}});
  const PhaseLabel ref = label_of(a, b);
  for (int i = 0; i < 10; ++i) {
    const double c = scale(rng);
    Series sa = a, sb = b;
    for (double& v : sa.x) v *= c;
    for (double& v : sb.x) v *= c;
    const PhaseLabel l = label_of(sa, sb);
    CHECK(l.kind == ref.kind);
    CHECK(l.diagnostics.dominant_freq == ref.diagnostics.dominant_freq);
    CHECK(l.diagnostics.peak_ratio == doctest::Approx(ref.diagnostics.peak_ratio));
    CHECK(l.diagnostics.motional_activity == doctest::Approx(c * ref.diagnostics.motional_activity));
  }
}

}  // TEST_SUITE
