#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "mkdv/experiments.hpp"
#include "mkdv/io.hpp"
#include "mkdv/verify.hpp"

using namespace mkdv;
using nlohmann::ordered_json;

namespace {

struct TempDir {
  std::filesystem::path p;
  explicit TempDir(const char* name) {
    p = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
  }
  ~TempDir() { std::filesystem::remove_all(p); }
  std::string operator/(const char* name) const { return (p / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("config files parse key = value lines with comments") {
  TempDir tmp("mkdv_cfg_test");
  const std::string path = tmp / "run.cfg";
  {
    std::ofstream out(path);
    out << "# painleve fixture\n"
        << "experiment = painleve\n"
        << "mass = 0.25   # target\n"
        << "\n"
        << "ode_tol = 1e-8\n";
  }
  ExperimentConfig cfg = ExperimentConfig::from_file(path);
  CHECK(cfg.experiment == "painleve");
  CHECK(cfg.num("mass", 0.0) == 0.25);
  CHECK(cfg.num("ode_tol", 0.0) == 1e-8);
  CHECK(cfg.num("dt", 2e-3) == 2e-3);  // default echoes into consumed()
  CHECK(cfg.consumed().at("mass") == "0.25");

  cfg.validate();
  cfg.set("bogus_key", "1");
  CHECK_THROWS_AS(cfg.validate(), MkdvError);

  ExperimentConfig bad;
  bad.experiment = "no_such_thing";
  CHECK_THROWS_AS(bad.validate(), MkdvError);

  {
    std::ofstream out(tmp / "broken.cfg");
    out << "this line has no equals\n";
  }
  CHECK_THROWS_AS((void)ExperimentConfig::from_file(tmp / "broken.cfg"), MkdvError);
}

TEST_CASE("numeric parsing rejects junk and fractional integers") {
  ExperimentConfig cfg;
  cfg.experiment = "decay";
  cfg.set("n", "4096.5");
  CHECK_THROWS_AS((void)cfg.integer("n", 0), MkdvError);
  cfg.set("dt", "fast");
  CHECK_THROWS_AS((void)cfg.num("dt", 0.0), MkdvError);
  cfg.set("a", "0.3,0.5");
  const std::vector<double> a = cfg.num_list("a", "");
  REQUIRE(a.size() == 2u);
  CHECK(a[0] == 0.3);
  CHECK(a[1] == 0.5);
}

TEST_CASE("initial data shapes are deterministic in the seed") {
  const GridPtr g = make_grid(256, 100.0);
  const PhysicalField a = initial_data(g, "random", 0.1, 2.0, 0.0, 42);
  const PhysicalField b = initial_data(g, "random", 0.1, 2.0, 0.0, 42);
  const PhysicalField c = initial_data(g, "random", 0.1, 2.0, 0.0, 43);
  double same = 0.0, diff = 0.0;
  for (int i = 0; i < g->n; ++i) {
    same = std::max(same, std::fabs(a.v[i] - b.v[i]));
    diff = std::max(diff, std::fabs(a.v[i] - c.v[i]));
  }
  CHECK(same == 0.0);
  CHECK(diff > 0.0);
  CHECK_THROWS_AS((void)initial_data(g, "triangle", 0.1, 2.0, 0.0, 1), MkdvError);

  const std::vector<double> ls = logspace(10.0, 200.0, 25);
  REQUIRE(ls.size() == 25u);
  CHECK(ls.front() == 10.0);
  CHECK(ls.back() == 200.0);
  for (std::size_t i = 0; i + 1 < ls.size(); ++i) CHECK(ls[i] < ls[i + 1]);
}

TEST_CASE("experiment runs are reproducible byte for byte") {
  TempDir tmp("mkdv_repro_test");
  auto run = [&](const char* sub) {
    ExperimentConfig cfg;
    cfg.experiment = "painleve";
    cfg.set("mass", "0.2");
    cfg.set("out", (tmp.p / sub).string());
    return run_experiment(cfg);
  };
  const ExperimentResult r1 = run("a");
  const ExperimentResult r2 = run("b");
  CHECK(r1.status == 0);
  CHECK(slurp(tmp.p / "a" / "painleve_report.json") ==
        slurp(tmp.p / "b" / "painleve_report.json"));
  CHECK(slurp(tmp.p / "a" / "painleve_profile.csv") ==
        slurp(tmp.p / "b" / "painleve_profile.csv"));
  CHECK(slurp(tmp.p / "a" / "painleve.svg") == slurp(tmp.p / "b" / "painleve.svg"));

  // manifests agree once the volatile fields (and the differing out dir) drop
  ordered_json m1 = load_json_file((tmp.p / "a" / "manifest.json").string());
  ordered_json m2 = load_json_file((tmp.p / "b" / "manifest.json").string());
  CHECK(m1["schema"] == "mkdv-manifest/1");
  CHECK(m1["incomplete"] == false);
  for (auto* m : {&m1, &m2}) {
    m->erase("wall_time_s");
    m->erase("timestamp");
    (*m)["config"].erase("out");
  }
  CHECK(m1 == m2);
}

TEST_CASE("verifier recomputes bands and rejects tampered or alien reports") {
  TempDir tmp("mkdv_verify_test");
  ExperimentConfig cfg;
  cfg.experiment = "painleve";
  cfg.set("mass", "0.2");
  cfg.set("out", (tmp.p / "run").string());
  const ExperimentResult res = run_experiment(cfg);

  const VerifyResult ok = verify_report(res.report);
  CHECK(ok.pass);
  CHECK(ok.failed == 0);
  CHECK(ok.checked >= 4);
  CHECK(ok.table.find("FAIL") == std::string::npos);

  // tampering with a measured value must flip the verdict even though the
  // stored "pass" flags still say true
  ordered_json doctored = res.report;
  doctored["metrics"]["ode_residual"] = 1.0;
  const VerifyResult bad = verify_report(doctored);
  CHECK_FALSE(bad.pass);
  CHECK(bad.failed >= 1);

  ordered_json alien = res.report;
  alien["schema"] = "other/9";
  CHECK_THROWS_AS((void)verify_report(alien), MkdvError);
  CHECK_THROWS_AS((void)verify_report(res.report, "strict"), MkdvError);

  ordered_json incomplete = res.report;
  incomplete["metrics"].erase("ode_residual");
  CHECK_THROWS_AS((void)verify_report(incomplete), MkdvError);
}
