#include <doctest.h>

#include <cmath>
#include <random>

#include "rydtweezer/config.hpp"
#include "rydtweezer/oracle.hpp"
#include "rydtweezer/units.hpp"

using namespace rydtweezer;

TEST_SUITE("units") {

TEST_CASE("oscillator length of 171Yb") {
  const PhysicalConstants pc;
  const double x0 = oscillator_length(pc, angular_from_khz(10.0));
  // sqrt(1.054571817e-34 / (171 * 1.66053906660e-27 * 2 pi 1e4))
  CHECK(x0 == doctest::Approx(7.688215397848648e-08).epsilon(1e-12));
  CHECK(oscillator_length(pc, angular_from_khz(40.0)) == doctest::Approx(x0 / 2.0).epsilon(1e-14));
  CHECK(oscillator_length(pc, angular_from_khz(0.5)) == doctest::Approx(std::sqrt(20.0) * x0).epsilon(1e-14));
}

TEST_CASE("oscillator length rejects non-positive input") {
  PhysicalConstants pc;
  CHECK_THROWS_AS(oscillator_length(pc, 0.0), ParameterError);
  CHECK_THROWS_AS(oscillator_length(pc, -1.0), ParameterError);
  pc.atomic_mass = 0.0;
  CHECK_THROWS_AS(oscillator_length(pc, 1.0), ParameterError);
}

TEST_CASE("Lamb-Dicke parameter follows the trap frequency at fixed k") {
  const PhysicalConstants pc;
  const double x10 = oscillator_length(pc, angular_from_khz(10.0));
  const double k = 0.1 * std::sqrt(2.0) / x10;
  CHECK(lamb_dicke(k, x10) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::abs(lamb_dicke(k, oscillator_length(pc, angular_from_khz(0.5))) - 0.45) < 0.005);
  CHECK(std::abs(lamb_dicke(k, oscillator_length(pc, angular_from_khz(3.0))) - 0.18) < 0.005);
  CHECK(lamb_dicke(0.0, x10) == 0.0);
}

TEST_CASE("eta sqrt(omega) is invariant at fixed k") {
  const PhysicalConstants pc;
  const double k = 3.7e6;
  const double ref = lamb_dicke(k, oscillator_length(pc, angular_from_khz(10.0))) * std::sqrt(10.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> f(0.2, 50.0);
  for (int i = 0; i < 200; ++i) {
    const double khz = f(rng);
    CHECK(lamb_dicke(k, oscillator_length(pc, angular_from_khz(khz))) * std::sqrt(khz) ==
          doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("Franck-Condon factors") {
  const double x = 7.7e-8, k = 2e6;
  const FranckCondon same = franck_condon(x, x, k);
  CHECK(same.zeta == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(same.eta_gR == doctest::Approx(lamb_dicke(k, x)).epsilon(1e-14));

  CHECK(franck_condon(x, 1e-6 * x, k).zeta < 2e-3);
  CHECK(franck_condon(x, 1e-12 * x, k).zeta < 2e-6);

  const FranckCondon from_eta = franck_condon_from_eta(x, 0.6 * x, lamb_dicke(k, x), lamb_dicke(k, 0.6 * x));
  const FranckCondon from_k = franck_condon(x, 0.6 * x, k);
  CHECK(from_eta.zeta == doctest::Approx(from_k.zeta).epsilon(1e-14));
  CHECK(from_eta.eta_gR == doctest::Approx(from_k.eta_gR).epsilon(1e-14));
}

TEST_CASE("zeta and the Gaussian factor match the overlap integral") {
  const PhysicalConstants pc;
  const double k = 0.1 * std::sqrt(2.0) / oscillator_length(pc, angular_from_khz(10.0));
  const double xg = oscillator_length(pc, angular_from_khz(10.0));
  const double xr = oscillator_length(pc, angular_from_khz(5.0));
  const FranckCondon fc = franck_condon(xg, xr, k);
  const auto q = oracle::franck_condon_quadrature(xg, xr, k);
  const double closed = fc.zeta * std::exp(-0.5 * fc.eta_gR * fc.eta_gR);
  CHECK(std::abs(std::abs(q.c00) - closed) / closed < 1e-8);
}

TEST_CASE("Franck-Condon product matches quadrature on a 10x10 trap grid") {
  const PhysicalConstants pc;
  const double k = 0.1 * std::sqrt(2.0) / oscillator_length(pc, angular_from_khz(10.0));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double fg = 0.5 + 19.5 * i / 9.0, fr = 0.5 + 19.5 * j / 9.0;
      const double xg = oscillator_length(pc, angular_from_khz(fg));
      const double xr = oscillator_length(pc, angular_from_khz(fr));
      const FranckCondon fc = franck_condon(xg, xr, k);
      const double closed = fc.zeta * std::exp(-0.5 * fc.eta_gR * fc.eta_gR);
      const auto q = oracle::franck_condon_quadrature(xg, xr, k);
      worst = std::max(worst, std::abs(std::abs(q.c00) - closed) / closed);
    }
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("blockade radius") {
  const double rb = blockade_radius(c6_angular(1.0), angular_from_khz(10.0));
  CHECK(std::abs(rb - 2.154) < 0.005);
  CHECK(rb == doctest::Approx(std::pow(100.0, 1.0 / 6.0)).epsilon(1e-14));
  CHECK(blockade_radius(5.0, 5.0) == doctest::Approx(1.0));
}

TEST_CASE("regime") {
  const double rb = 2.154;
  CHECK(classify_regime(4.0 * rb, rb) == Regime::Weak);
  CHECK(classify_regime(rb, rb) == Regime::Blockade);
  CHECK(classify_regime(rb * (1.0 + 1e-12), rb) == Regime::Blockade);
  CHECK(classify_regime(0.5 * rb, rb) == Regime::Strong);
  CHECK(to_string(Regime::Weak) == "Weak");
}

TEST_CASE("vdW Taylor coefficients") {
  const VdwCoefficients unit = vdw_coefficients(1.0, 1.0, 1.0);
  CHECK(unit.v0 == doctest::Approx(1.0));
  CHECK(unit.v1 == doctest::Approx(-6.0));
  CHECK(unit.v2 == doctest::Approx(42.0));

  const VdwCoefficients a = vdw_coefficients(3.0, 1.7, 0.2), b = vdw_coefficients(3.0, 3.4, 0.2);
  CHECK(b.v0 / a.v0 == doctest::Approx(std::pow(2.0, -6)));
  CHECK(b.v1 / a.v1 == doctest::Approx(std::pow(2.0, -7)));
  CHECK(b.v2 / a.v2 == doctest::Approx(std::pow(2.0, -8)));

  CHECK_THROWS_AS(vdw_coefficients(1.0, 0.0, 1.0), ParameterError);
  CHECK_THROWS_AS(vdw_coefficients(1.0, -2.0, 1.0), ParameterError);
}

TEST_CASE("vdW coefficients agree with finite differences of the bare potential") {
  SystemConfig c;
  const DerivedParams d = derive(c);
  const double c6 = c6_angular(c.c6);
  const double r = d.spacing_R, h = 0.01 * r, x0 = d.x0_R * 1e6;
  auto pot = [&](double s) { return c6 / std::pow(std::abs(s), 6); };
  const double f0 = pot(r), fp = pot(r + h), fm = pot(r - h);
  const double d1 = (fp - fm) / (2 * h), d2 = (fp - 2 * f0 + fm) / (h * h);
  CHECK(d.v0 == doctest::Approx(f0).epsilon(1e-14));
  CHECK(d.v1 == doctest::Approx(d1 * x0).epsilon(2e-3));
  CHECK(d.v2 == doctest::Approx(d2 * x0 * x0).epsilon(3e-3));
  CHECK(d.v1 < 0.0);
  CHECK(d.v2 > 0.0);
}

TEST_CASE("ramp protocol") {
  const double w0 = angular_from_khz(10.0), r = angular_from_khz(1.0), T = kTwoPi / w0;
  CHECK(ramp_omega(0.0, r, w0, T) == 0.0);
  CHECK(ramp_omega(5 * T, r, w0, T) == doctest::Approx(angular_from_khz(5.0)));
  CHECK(ramp_omega(10 * T, r, w0, T) == doctest::Approx(w0));
  CHECK(ramp_omega(50 * T, r, w0, T) == w0);
  double prev = 0.0;
  for (int i = 0; i <= 3000; ++i) {
    const double v = ramp_omega(i * 0.005 * T, r, w0, T);
    CHECK(v >= prev);
    CHECK(v - prev <= r * 0.005 * (1 + 1e-12) + 1e-9);
    prev = v;
  }
}

}  // TEST_SUITE
