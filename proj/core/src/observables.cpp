#include "rydtweezer/observables.hpp"

#include <algorithm>
#include <stdexcept>

namespace rydtweezer {

ObservableSample measure(const StateVector& psi, bool per_site) {
  const int n = psi.n_atoms();
  if (psi.size() != dimension(n)) throw std::invalid_argument("state dimension mismatch");
  std::vector<SiteObservables> sites(static_cast<std::size_t>(n));
  const auto amps = psi.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const Complex a = amps[i];
    const double p = std::norm(a);
    for (int j = 0; j < n; ++j) {
      SiteObservables& s = sites[static_cast<std::size_t>(j)];
      const std::size_t int_mask = std::size_t{1} << bit_position(j, Subsystem::Internal);
      const std::size_t mot_mask = int_mask << 1;
      s.tau_z += (i & int_mask) ? p : -p;
      if (i & mot_mask) {
        s.sigma_z += p;
      } else {
        s.sigma_z -= p;
        // <psi|sigma^x|psi> and <psi|sigma^y|psi> from the (|0>, |1>) pair.
        const Complex b = amps[i | mot_mask];
        const double re = a.real() * b.real() + a.imag() * b.imag();
        const double im = a.real() * b.imag() - a.imag() * b.real();
        s.sigma_x += 2.0 * re;
        s.sigma_y -= 2.0 * im;
      }
    }
  }
  ObservableSample out;
  for (const auto& s : sites) {
    out.tau_z_total += s.tau_z;
    out.sigma_z_total += s.sigma_z;
    out.sigma_x_total += s.sigma_x;
    out.sigma_y_total += s.sigma_y;
  }
  const double inv_n = 1.0 / n;
  out.tau_z_total *= inv_n;
  out.sigma_z_total *= inv_n;
  out.sigma_x_total *= inv_n;
  out.sigma_y_total *= inv_n;
  if (per_site) out.per_site = std::move(sites);
  return out;
}

void TrajectoryRecord::append(const ObservableSample& sample, double energy_khz, double norm_value) {
  times.push_back(sample.t_over_T);
  tau_z.push_back(sample.tau_z_total);
  sigma_z.push_back(sample.sigma_z_total);
  sigma_x.push_back(sample.sigma_x_total);
  sigma_y.push_back(sample.sigma_y_total);
  energy.push_back(energy_khz);
  norm.push_back(norm_value);
  if (!sample.per_site.empty()) per_site.push_back(sample.per_site);
}

void TrajectoryRecord::validate() const {
  const std::size_t n = times.size();
  for (const auto* column : {&tau_z, &sigma_z, &sigma_x, &sigma_y, &energy, &norm})
    if (column->size() != n) throw std::invalid_argument("trajectory columns have unequal lengths");
  if (!per_site.empty() && per_site.size() != n)
    throw std::invalid_argument("per-site samples do not match the time axis");
  for (std::size_t i = 1; i < n; ++i)
    if (!(times[i] > times[i - 1])) throw std::invalid_argument("trajectory times are not strictly increasing");
}

std::pair<std::size_t, std::size_t> window_range(std::span<const double> times, TimeWindow window) {
  if (!(window.hi > window.lo)) throw std::invalid_argument("empty time window");
  // Sample times are k * dt products; absorb their last-digit rounding.
  constexpr double kSlack = 1e-9;
  const auto first = std::lower_bound(times.begin(), times.end(), window.lo - kSlack);
  const auto last = std::lower_bound(first, times.end(), window.hi - kSlack);
  return {static_cast<std::size_t>(first - times.begin()), static_cast<std::size_t>(last - times.begin())};
}

std::vector<PhasePoint> phase_trajectory(const TrajectoryRecord& record, TimeWindow window) {
  const auto [first, last] = window_range(record.times, window);
  if (first >= last) throw std::invalid_argument("time window holds no samples");
  std::vector<PhasePoint> points;
  points.reserve(last - first);
  for (std::size_t i = first; i < last; ++i)
    points.push_back({record.sigma_x[i], record.sigma_y[i], record.tau_z[i]});
  return points;
}

std::vector<PhasePoint> phase_trajectory(const TrajectoryRecord& record) {
  if (record.size() == 0) throw std::invalid_argument("empty trajectory");
  std::vector<PhasePoint> points;
  points.reserve(record.size());
  for (std::size_t i = 0; i < record.size(); ++i)
    points.push_back({record.sigma_x[i], record.sigma_y[i], record.tau_z[i]});
  return points;
}

std::vector<double> running_time_average(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  std::vector<double> out(values.size());
  if (values.empty()) return out;
  out[0] = values[0];
  double integral = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double dt = times[i] - times[i - 1];
    if (!(dt > 0.0)) throw std::invalid_argument("times are not strictly increasing");
    integral += 0.5 * dt * (values[i] + values[i - 1]);
    out[i] = integral / (times[i] - times[0]);
  }
  return out;
}

}  // namespace rydtweezer
