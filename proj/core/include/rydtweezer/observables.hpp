#pragma once

#include <span>
#include <vector>

#include "rydtweezer/config.hpp"
#include "rydtweezer/hilbert.hpp"

namespace rydtweezer {

struct SiteObservables {
  double tau_z = 0.0;
  double sigma_z = 0.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
};

/// Site-averaged expectation values (1/n) sum_j <O_j>, instantaneous in t.
struct ObservableSample {
  double t_over_T = 0.0;
  double tau_z_total = 0.0;
  double sigma_z_total = 0.0;
  double sigma_x_total = 0.0;
  double sigma_y_total = 0.0;
  std::vector<SiteObservables> per_site;  // filled only on request
};

ObservableSample measure(const StateVector& psi, bool per_site = false);

/// Sampled time series of one run. Energy is <H>/h in kHz.
struct TrajectoryRecord {
  std::vector<double> times;  // units of T
  std::vector<double> tau_z;
  std::vector<double> sigma_z;
  std::vector<double> sigma_x;
  std::vector<double> sigma_y;
  std::vector<double> energy;
  std::vector<double> norm;
  std::vector<std::vector<SiteObservables>> per_site;  // empty unless requested

  std::size_t size() const { return times.size(); }
  void append(const ObservableSample& sample, double energy_khz, double norm_value);
  /// Throws std::invalid_argument on unequal column lengths or non-increasing times.
  void validate() const;
};

/// (<sigma^x_T>, <sigma^y_T>, <tau^z_T>) of one sample.
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Index range [first, last) of the samples with lo <= t < hi.
std::pair<std::size_t, std::size_t> window_range(std::span<const double> times, TimeWindow window);

/// Phase-space points of the samples inside the window, in time order.
/// Throws std::invalid_argument when the window holds no sample.
std::vector<PhasePoint> phase_trajectory(const TrajectoryRecord& record, TimeWindow window);
/// Whole record.
std::vector<PhasePoint> phase_trajectory(const TrajectoryRecord& record);

/// Running average (1/t) int_0^t f dt' by the trapezoid rule; the first entry
/// is f(t0) itself.
std::vector<double> running_time_average(std::span<const double> times, std::span<const double> values);

}  // namespace rydtweezer
