#include "mkdv/io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace mkdv {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping not implemented");
static_assert(sizeof(cplx) == 2 * sizeof(double), "complex layout assumption");

namespace {

struct FileCloser {
  std::FILE* f;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

[[noreturn]] void io_fail(const std::string& what, const std::string& path) {
  throw MkdvError("io: " + what + " '" + path + "'");
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralField& f, double t) {
  const Grid& g = *f.grid;
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) io_fail("cannot open for writing", path);
  FileCloser guard{fp};
  const std::int64_t n = g.n;
  bool ok = std::fwrite(&n, sizeof n, 1, fp) == 1;
  ok = ok && std::fwrite(&g.length, sizeof(double), 1, fp) == 1;
  ok = ok && std::fwrite(&t, sizeof(double), 1, fp) == 1;
  ok = ok && std::fwrite(f.c.data(), sizeof(cplx), f.c.size(), fp) == f.c.size();
  if (!ok || std::fflush(fp) != 0) io_fail("short write to", path);
}

SnapshotRecord read_snapshot(const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) io_fail("cannot open", path);
  FileCloser guard{fp};
  std::int64_t n = 0;
  double L = 0.0, t = 0.0;
  if (std::fread(&n, sizeof n, 1, fp) != 1 || std::fread(&L, sizeof L, 1, fp) != 1 ||
      std::fread(&t, sizeof t, 1, fp) != 1)
    io_fail("truncated header in", path);
  if (n <= 0 || n > (1 << 26)) io_fail("implausible mode count in", path);
  SnapshotRecord rec;
  rec.t = t;
  rec.field = SpectralField(make_grid(static_cast<int>(n), L));
  if (std::fread(rec.field.c.data(), sizeof(cplx), rec.field.c.size(), fp) !=
      rec.field.c.size())
    io_fail("truncated payload in", path);
  require_finite(rec.field.c, "snapshot coefficients");
  return rec;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : path_(path), ncols_(columns.size()) {
  if (columns.empty()) throw MkdvError("io: csv needs at least one column");
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) io_fail("cannot open for writing", path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    std::fprintf(f_, "%s%s", columns[i].c_str(), i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { close(); }

void CsvWriter::row(const std::vector<double>& values) {
  if (!f_) io_fail("write to closed csv", path_);
  if (values.size() != ncols_) throw MkdvError("io: csv row arity mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f_, "%.17g%s", values[i], i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::close() {
  if (f_) {
    std::fclose(f_);
    f_ = nullptr;
  }
}

void write_physical_csv(const std::string& path, const PhysicalField& u, double t) {
  CsvWriter csv(path, {"t", "x", "u"});
  const Grid& g = *u.grid;
  for (int i = 0; i < g.n; ++i) csv.row({t, g.x[i], u.v[i]});
}

void save_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) io_fail("cannot open for writing", path);
  FileCloser guard{fp};
  const std::string body = j.dump(2);
  if (std::fwrite(body.data(), 1, body.size(), fp) != body.size() ||
      std::fputc('\n', fp) == EOF)
    io_fail("short write to", path);
}

nlohmann::ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) io_fail("cannot open", path);
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw MkdvError("io: bad json in '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace mkdv
