#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rydtweezer/hamiltonian.hpp"

namespace rydtweezer::selftest {

struct Options {
  double dt_over_T = 1e-3;
  // Applied to every term list before compilation; used to check that the
  // suites catch a broken Hamiltonian.
  std::function<void(HamiltonianTerms&)> mutate;
};

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
};

std::vector<Check> hermiticity(const Options& options);
std::vector<Check> dense_oracle(const Options& options);
std::vector<Check> franck_condon(const Options& options);
std::vector<Check> rabi_closed_form(const Options& options);
std::vector<Check> norm_drift(const Options& options);
std::vector<Check> exact_propagation(const Options& options);

/// All suites in order.
std::vector<Check> run_all(const Options& options);

/// Flips the sign of the exchange (four-factor) terms of the interaction.
void flip_exchange_sign(HamiltonianTerms& terms);

void print(std::ostream& out, const std::vector<Check>& checks);
bool all_passed(const std::vector<Check>& checks);

}  // namespace rydtweezer::selftest
