#include "rydtweezer/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rydtweezer {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CsvError("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, const std::string& path, std::size_t line_no) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  while (begin < end && *begin == ' ') ++begin;
  if (begin < end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw CsvError(path + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
  return v;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

void write_timeseries_csv(const std::string& path, const TrajectoryRecord& r) {
  r.validate();
  auto out = open_for_write(path);
  out << "t_over_T,tau_z,sigma_z,sigma_x,sigma_y,energy,norm\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    out << format_double(r.times[i]) << ',' << format_double(r.tau_z[i]) << ',' << format_double(r.sigma_z[i]) << ','
        << format_double(r.sigma_x[i]) << ',' << format_double(r.sigma_y[i]) << ',' << format_double(r.energy[i])
        << ',' << format_double(r.norm[i]) << '\n';
  }
  if (!out) throw CsvError("write failed for '" + path + "'");
}

TrajectoryRecord read_timeseries_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  TrajectoryRecord r;
  const std::size_t ct = table.column("t_over_T"), c1 = table.column("tau_z"), c2 = table.column("sigma_z"),
                    c3 = table.column("sigma_x"), c4 = table.column("sigma_y"), c5 = table.column("energy"),
                    c6 = table.column("norm");
  for (const auto& row : table.rows) {
    r.times.push_back(row[ct]);
    r.tau_z.push_back(row[c1]);
    r.sigma_z.push_back(row[c2]);
    r.sigma_x.push_back(row[c3]);
    r.sigma_y.push_back(row[c4]);
    r.energy.push_back(row[c5]);
    r.norm.push_back(row[c6]);
  }
  try {
    r.validate();
  } catch (const std::invalid_argument& e) {
    throw CsvError(path + ": " + e.what());
  }
  return r;
}

void write_per_site_csv(const std::string& path, const TrajectoryRecord& r) {
  if (r.per_site.size() != r.size()) throw CsvError("record has no per-site samples");
  auto out = open_for_write(path);
  out << "t_over_T,site,tau_z,sigma_z,sigma_x,sigma_y\n";
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < r.per_site[i].size(); ++j) {
      const SiteObservables& s = r.per_site[i][j];
      out << format_double(r.times[i]) << ',' << j << ',' << format_double(s.tau_z) << ','
          << format_double(s.sigma_z) << ',' << format_double(s.sigma_x) << ',' << format_double(s.sigma_y) << '\n';
    }
  }
}

void write_spectrum_csv(const std::string& path, const SpectrumResult& s) {
  auto out = open_for_write(path);
  out << "freq_khz,amp\n";
  for (std::size_t i = 0; i < s.size(); ++i) out << format_double(s.freqs[i]) << ',' << format_double(s.amps[i]) << '\n';
}

void write_phasespace_csv(const std::string& path, const TrajectoryRecord& r) {
  auto out = open_for_write(path);
  out << "t_over_T,sigma_x,sigma_y,tau_z\n";
  for (std::size_t i = 0; i < r.size(); ++i)
    out << format_double(r.times[i]) << ',' << format_double(r.sigma_x[i]) << ',' << format_double(r.sigma_y[i]) << ','
        << format_double(r.tau_z[i]) << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw CsvError("missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw CsvError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size())
      throw CsvError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                     " fields, got " + std::to_string(cells.size()));
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace rydtweezer
