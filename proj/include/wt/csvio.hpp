#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "wt/dynamics.hpp"
#include "wt/statistics.hpp"

namespace wt {

// CSV emission: UTF-8, comma-separated, '.' decimal, scientific notation
// with 17 significant digits so values round-trip exactly.  Every file gets
// a sidecar <name>.schema.json describing its columns.
struct CsvColumn {
  std::string name;
  std::string unit; // empty when dimensionless
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<CsvColumn> columns);
  ~CsvWriter();

  void row(const std::vector<double>& values);
  // first column as a label (e.g. a mode index), remaining numeric
  void row(const std::string& label, const std::vector<double>& values);
  void close();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<CsvColumn> columns_;
  std::string buffer_;
  bool closed_ = false;
};

std::string format_double(double v);

// FNV-1a over the canonicalized text; used as the config hash in summaries.
std::string fnv1a_hex(const std::string& text);

// Trajectory samples, one row per (time, mode): time, mode, Re a, Im a.
void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory);

// Per-mode ensemble statistics, one row per mode.
void write_ensemble_stats_csv(const std::filesystem::path& path,
                              const EnsembleStats& stats);

// Histogram rows (s at bin centers, density, standard error).
void write_histogram_csv(const std::filesystem::path& path,
                         const OneModeHistogram& histogram);

} // namespace wt
