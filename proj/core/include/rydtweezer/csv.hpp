#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rydtweezer/observables.hpp"
#include "rydtweezer/spectral.hpp"

namespace rydtweezer {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double value);

/// Header t_over_T,tau_z,sigma_z,sigma_x,sigma_y,energy,norm.
void write_timeseries_csv(const std::string& path, const TrajectoryRecord& record);
/// Throws CsvError on a malformed file or non-increasing times.
TrajectoryRecord read_timeseries_csv(const std::string& path);

/// Header t_over_T,site,tau_z,sigma_z,sigma_x,sigma_y; one row per site and sample.
void write_per_site_csv(const std::string& path, const TrajectoryRecord& record);

/// Header freq_khz,amp.
void write_spectrum_csv(const std::string& path, const SpectrumResult& spectrum);

/// Header t_over_T,sigma_x,sigma_y,tau_z.
void write_phasespace_csv(const std::string& path, const TrajectoryRecord& record);

/// Generic reader: header names and numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

}  // namespace rydtweezer
