#include "wt/csvio.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::vector<CsvColumn> columns)
    : path_(path), columns_(std::move(columns)) {
  if (columns_.empty())
    throw std::invalid_argument("CsvWriter: need at least one column");
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += columns_[i].name;
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::string& label,
                    const std::vector<double>& values) {
  if (values.size() + 1 != columns_.size())
    throw std::invalid_argument("CsvWriter: row width mismatch");
  buffer_ += label;
  for (double v : values) {
    buffer_ += ',';
    buffer_ += format_double(v);
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::filesystem::create_directories(path_.parent_path());
  {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_.string());
    out << buffer_;
  }
  nlohmann::json schema;
  schema["file"] = path_.filename().string();
  schema["columns"] = nlohmann::json::array();
  for (const CsvColumn& c : columns_) {
    nlohmann::json col;
    col["name"] = c.name;
    if (!c.unit.empty()) col["unit"] = c.unit;
    schema["columns"].push_back(col);
  }
  std::ofstream sidecar(path_.string() + ".schema.json",
                        std::ios::binary | std::ios::trunc);
  sidecar << schema.dump(2) << '\n';
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& trajectory) {
  CsvWriter csv(path, {{"time", "time"},
                       {"mode", ""},
                       {"re_a", "sqrt(waveaction)"},
                       {"im_a", "sqrt(waveaction)"}});
  for (std::size_t s = 0; s < trajectory.times.size(); ++s) {
    const ArrayXcd& a = trajectory.states[s];
    for (int i = 0; i < a.size(); ++i)
      csv.row({trajectory.times[s], static_cast<double>(i), a[i].real(),
               a[i].imag()});
  }
  csv.close();
}

void write_ensemble_stats_csv(const std::filesystem::path& path,
                              const EnsembleStats& stats) {
  std::vector<CsvColumn> cols = {{"mode", ""},
                                 {"n", "waveaction"},
                                 {"sigma", "waveaction"}};
  const int pmax = static_cast<int>(stats.M.cols()) - 1;
  for (int p = 2; p <= pmax; ++p) {
    cols.push_back({"M" + std::to_string(p), ""});
    cols.push_back({"M" + std::to_string(p) + "_stderr", ""});
  }
  CsvWriter csv(path, cols);
  for (int i = 0; i < stats.n.size(); ++i) {
    std::vector<double> row = {static_cast<double>(i), stats.n[i],
                               stats.sigma[i]};
    for (int p = 2; p <= pmax; ++p) {
      row.push_back(stats.M(i, p));
      row.push_back(stats.M_stderr(i, p));
    }
    csv.row(row);
  }
  csv.close();
}

void write_histogram_csv(const std::filesystem::path& path,
                         const OneModeHistogram& histogram) {
  CsvWriter csv(path, {{"s", "waveaction"},
                       {"P", "1/waveaction"},
                       {"P_stderr", "1/waveaction"}});
  const int B = static_cast<int>(histogram.density.size());
  for (int b = 0; b < B; ++b)
    csv.row({0.5 * (histogram.s_edges[b] + histogram.s_edges[b + 1]),
             histogram.density[b], histogram.density_stderr[b]});
  csv.close();
}

} // namespace wt
