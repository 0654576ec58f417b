#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mkdv/io.hpp"
#include "mkdv/spectral.hpp"

using namespace mkdv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path p;
  TempDir() {
    p = std::filesystem::temp_directory_path() / "mkdv_io_test";
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
  }
  ~TempDir() { std::filesystem::remove_all(p); }
  std::string operator/(const char* name) const { return (p / name).string(); }
};

}  // namespace

TEST_CASE("binary snapshots round-trip bit for bit") {
  TempDir tmp;
  const GridPtr g = make_grid(64, 32.0);
  PhysicalField u(g);
  for (int i = 0; i < g->n; ++i) u.v[i] = std::sin(0.7 * g->x[i]) * std::exp(-0.01 * g->x[i] * g->x[i]);
  const SpectralField U = transform(u);

  const std::string path = tmp / "snap.bin";
  write_snapshot(path, U, 12.25);
  const SnapshotRecord rec = read_snapshot(path);
  CHECK(rec.t == 12.25);
  CHECK(rec.field.n() == 64);
  CHECK(rec.field.grid->length == 32.0);
  for (int j = 0; j < 64; ++j) CHECK(rec.field.c[j] == U.c[j]);

  // header: int64 n, double L, double t, then n complex pairs
  CHECK(std::filesystem::file_size(path) == 8u + 8u + 8u + 64u * 16u);

  // a truncated file is rejected
  std::filesystem::resize_file(path, 100);
  CHECK_THROWS_AS((void)read_snapshot(path), MkdvError);
}

TEST_CASE("snapshot reader rejects implausible headers") {
  TempDir tmp;
  const std::string path = tmp / "bogus.bin";
  {
    std::ofstream out(path, std::ios::binary);
    const std::int64_t n = -4;
    const double L = 10.0, t = 1.0;
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&L), 8);
    out.write(reinterpret_cast<const char*>(&t), 8);
  }
  CHECK_THROWS_AS((void)read_snapshot(path), MkdvError);
  CHECK_THROWS_AS((void)read_snapshot(tmp / "missing.bin"), MkdvError);
}

TEST_CASE("csv writer emits %.17g values that re-read exactly") {
  TempDir tmp;
  const std::string path = tmp / "table.csv";
  {
    CsvWriter csv(path, {"t", "value"});
    csv.row({1.0, 1.0 / 3.0});
    csv.row({2.0, 6.02214076e23});
  }
  const std::string text = slurp(path);
  CHECK(text.substr(0, 8) == "t,value\n");
  std::istringstream lines(text);
  std::string header, l1, l2;
  std::getline(lines, header);
  std::getline(lines, l1);
  std::getline(lines, l2);
  double t, v;
  REQUIRE(std::sscanf(l1.c_str(), "%lf,%lf", &t, &v) == 2);
  CHECK(v == 1.0 / 3.0);  // full precision round-trip
  REQUIRE(std::sscanf(l2.c_str(), "%lf,%lf", &t, &v) == 2);
  CHECK(v == 6.02214076e23);

  CsvWriter arity(tmp / "arity.csv", {"a", "b"});
  CHECK_THROWS_AS(arity.row({1.0}), MkdvError);
}

TEST_CASE("physical csv carries the documented t,x,u header") {
  TempDir tmp;
  const GridPtr g = make_grid(16, 16.0);
  PhysicalField u(g);
  for (int i = 0; i < 16; ++i) u.v[i] = i;
  const std::string path = tmp / "u.csv";
  write_physical_csv(path, u, 3.5);
  const std::string text = slurp(path);
  CHECK(text.substr(0, 6) == "t,x,u\n");
  double t, x, val;
  REQUIRE(std::sscanf(text.c_str() + 6, "%lf,%lf,%lf", &t, &x, &val) == 3);
  CHECK(t == 3.5);
  CHECK(x == -8.0);
  CHECK(val == 0.0);
}

TEST_CASE("json save/load preserves key order and values") {
  TempDir tmp;
  nlohmann::ordered_json j;
  j["zeta"] = 1;
  j["alpha"] = {{"x", 0.5}, {"y", -2.0}};
  const std::string path = tmp / "doc.json";
  save_json(path, j);
  const std::string text = slurp(path);
  CHECK(text.find("\"zeta\"") < text.find("\"alpha\""));  // insertion order kept
  CHECK(text.back() == '\n');
  const nlohmann::ordered_json back = load_json_file(path);
  CHECK(back == j);
  CHECK_THROWS_AS((void)load_json_file(tmp / "absent.json"), MkdvError);
}

TEST_CASE("format_double survives the round trip at all magnitudes") {
  for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}
