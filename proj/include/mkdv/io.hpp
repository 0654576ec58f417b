#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "json.hpp"

#include "mkdv/grid.hpp"

namespace mkdv {

// Binary spectral snapshot. Layout (little-endian throughout):
//   int64   n        number of modes
//   double  L        box length
//   double  t        snapshot time
//   double  re, im   n complex coefficients in FFT mode order
struct SnapshotRecord {
  SpectralField field;
  double t = 0.0;
};

void write_snapshot(const std::string& path, const SpectralField& f, double t);
SnapshotRecord read_snapshot(const std::string& path);

// CSV writer pinned to %.17g so that round-trips are bit-exact and repeated
// runs diff clean. The header row is written on construction.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void close();

 private:
  std::FILE* f_ = nullptr;
  std::string path_;
  std::size_t ncols_ = 0;
};

// Physical snapshot CSV with header t,x,u (t repeated per row).
void write_physical_csv(const std::string& path, const PhysicalField& u, double t);

// Ordered JSON persisted with 2-space indent and trailing newline.
void save_json(const std::string& path, const nlohmann::ordered_json& j);
nlohmann::ordered_json load_json_file(const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace mkdv
