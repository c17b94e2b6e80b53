#include <doctest.h>

#include <fstream>
#include <random>

#include "rydtweezer/hilbert.hpp"
#include "rydtweezer/oracle.hpp"
#include "support.hpp"

using namespace rydtweezer;

namespace {

Eigen::VectorXcd as_vector(const StateVector& psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t i = 0; i < psi.size(); ++i) v[static_cast<Eigen::Index>(i)] = psi[i];
  return v;
}

double distance(const StateVector& a, const Eigen::VectorXcd& b) { return (as_vector(a) - b).norm(); }

constexpr PauliOp kOps[] = {PauliOp::X, PauliOp::Y, PauliOp::Z, PauliOp::Raise,
                            PauliOp::Lower, PauliOp::Proj0, PauliOp::Proj1};

}  // namespace

TEST_SUITE("hilbert") {

TEST_CASE("dimension") {
  CHECK(dimension(1) == 4);
  CHECK(dimension(3) == 64);
  CHECK(dimension(10) == 1048576);
  CHECK_THROWS_AS(dimension(0), std::invalid_argument);
  CHECK_THROWS_AS(dimension(40), std::overflow_error);
}

TEST_CASE("encode and decode are inverse") {
  for (int n = 1; n <= 4; ++n) {
    for (std::size_t i = 0; i < dimension(n); ++i) CHECK(encode(decode(i, n)) == i);
  }
  const std::vector<LocalState> sites{{true, false}, {false, true}};
  CHECK(encode(sites) == 0b1001u);
  CHECK_THROWS_AS(decode(16, 2), std::out_of_range);
}

TEST_CASE("initial state is all |g,0>") {
  const StateVector psi = initial_state(3);
  CHECK(psi[0] == Complex(1.0));
  CHECK(norm(psi) == doctest::Approx(1.0));
}

TEST_CASE("single-site operators match Kronecker embedding") {
  std::mt19937_64 rng(11);
  const int n = 3;
  const StateVector psi = testing::random_state(n, rng);
  for (int atom = 0; atom < n; ++atom) {
    for (Subsystem sub : {Subsystem::Internal, Subsystem::Motional}) {
      for (PauliOp op : kOps) {
        const SiteOperator s{atom, sub, op};
        StateVector out(n);
        apply_site_op(psi, out, s, Complex(0.3, -0.7));
        const Eigen::VectorXcd ref = Complex(0.3, -0.7) * oracle::embed(n, s) * as_vector(psi);
        CHECK(distance(out, ref) < 1e-14);
      }
    }
  }
}

TEST_CASE("two-site and product operators match Kronecker embedding") {
  std::mt19937_64 rng(12);
  const int n = 3;
  const StateVector psi = testing::random_state(n, rng);
  const SiteOperator a{0, Subsystem::Internal, PauliOp::Proj1};
  const SiteOperator b{2, Subsystem::Motional, PauliOp::Raise};
  const SiteOperator c{2, Subsystem::Internal, PauliOp::Y};
  StateVector out(n);
  apply_two_site_op(psi, out, a, b, Complex(2.0));
  Eigen::VectorXcd ref = 2.0 * oracle::embed(n, a) * oracle::embed(n, b) * as_vector(psi);
  CHECK(distance(out, ref) < 1e-14);

  out.set_zero();
  const std::vector<SiteOperator> factors{a, b, c};
  apply_product(psi, out, factors, Complex(0.0, 1.0));
  ref = Complex(0.0, 1.0) * oracle::embed(n, a) * oracle::embed(n, b) * oracle::embed(n, c) * as_vector(psi);
  CHECK(distance(out, ref) < 1e-14);

  CHECK_THROWS_AS(apply_two_site_op(psi, out, a, SiteOperator{0, Subsystem::Motional, PauliOp::X}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_site_op(psi, out, SiteOperator{5, Subsystem::Internal, PauliOp::X}, 1.0), std::out_of_range);
}

TEST_CASE("site operators are linear") {
  std::mt19937_64 rng(13);
  const int n = 2;
  const StateVector u = testing::random_state(n, rng), v = testing::random_state(n, rng);
  const Complex alpha(0.4, 1.1), beta(-2.0, 0.25);
  StateVector w(n);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = alpha * u[i] + beta * v[i];
  const SiteOperator s{1, Subsystem::Motional, PauliOp::Y};
  StateVector ou(n), ov(n), ow(n);
  apply_site_op(u, ou, s, 1.0);
  apply_site_op(v, ov, s, 1.0);
  apply_site_op(w, ow, s, 1.0);
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) err = std::max(err, std::abs(ow[i] - alpha * ou[i] - beta * ov[i]));
  CHECK(err < 1e-14);
}

TEST_CASE("inner product and norm") {
  std::mt19937_64 rng(14);
  const StateVector a = testing::random_state(2, rng), b = testing::random_state(2, rng);
  CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-15);
  CHECK(inner(a, a).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(inner(a, StateVector(3)), std::invalid_argument);
}

TEST_CASE("checkpoint round trip") {
  const auto dir = testing::scratch_dir("checkpoint");
  std::mt19937_64 rng(15);
  const StateVector psi = testing::random_state(3, rng);
  const auto path = (dir / "state.bin").string();
  write_checkpoint(path, psi);
  const StateVector back = read_checkpoint(path);
  REQUIRE(back.n_atoms() == 3);
  for (std::size_t i = 0; i < psi.size(); ++i) CHECK(back[i] == psi[i]);

  std::ofstream(path, std::ios::binary) << "RYDTWZCK";  // header only
  CHECK_THROWS(read_checkpoint(path));
  std::ofstream(path, std::ios::binary) << "not a checkpoint at all";
  CHECK_THROWS(read_checkpoint(path));
  CHECK_THROWS(read_checkpoint((dir / "missing.bin").string()));
}

}  // TEST_SUITE
