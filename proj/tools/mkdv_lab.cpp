#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mkdv/experiments.hpp"
#include "mkdv/io.hpp"
#include "mkdv/verify.hpp"

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

const std::vector<FlagSpec> kCommonFlags = {
    {"--n", "n", "grid points (power of two)"},
    {"--L", "L", "box length"},
    {"--dt", "dt", "time step"},
    {"--t-end", "t_end", "final time"},
    {"--eps", "eps", "initial-data amplitude"},
    {"--w0", "w0", "initial-data width"},
    {"--x0", "x0", "initial-data centre"},
    {"--shape", "shape", "initial-data shape: gaussian | sech | random"},
    {"--seed", "seed", "seed for shape=random"},
    {"--out", "out", "output directory"},
};

std::vector<FlagSpec> extra_flags(const std::string& name) {
  if (name == "scattering") return {{"--xi-star", "xi_star", "probe wavenumber"},
                                    {"--gamma", "gamma", "region exponent"}};
  if (name == "selfsimilar")
    return {{"--gamma", "gamma", "region exponent"},
            {"--ode-tol", "ode_tol", "Painleve ODE residual tolerance"}};
  if (name == "painleve")
    return {{"--mass", "mass", "target profile mass"},
            {"--ode-tol", "ode_tol", "ODE residual tolerance"}};
  if (name == "soliton_stability")
    return {{"--c0", "c0", "soliton speed"},
            {"--m", "m", "polynomial weight exponent (m > 1/2)"},
            {"--snapshots", "snapshots", "number of track samples"}};
  if (name == "semigroup")
    return {{"--c0", "c0", "soliton speed"},
            {"--a", "a", "comma-separated weight rates, 0 < a < sqrt(c/3)"}};
  if (name == "oscint_check")
    return {{"--budget", "budget", "quadrature cell budget"},
            {"--t-list", "t_list", "comma-separated trend times"},
            {"--probes", "probes", "comma-separated consistency wavenumbers"},
            {"--xi-star", "xi_star", "trend probe wavenumber"}};
  return {};
}

int run_one(const std::string& name, const std::string& config_path,
            const std::vector<std::pair<std::string, std::string>>& overrides) {
  mkdv::ExperimentConfig cfg;
  if (!config_path.empty()) {
    cfg = mkdv::ExperimentConfig::from_file(config_path);
    if (!cfg.experiment.empty() && cfg.experiment != name)
      throw mkdv::MkdvError("config file is for experiment '" + cfg.experiment +
                            "', but subcommand is '" + name + "'");
  }
  cfg.experiment = name;
  for (const auto& [k, v] : overrides) cfg.set(k, v);

  const mkdv::ExperimentResult res = mkdv::run_experiment(cfg);
  for (const auto& t : res.report.at("targets")) {
    const bool ok = t.at("pass").get<bool>();
    std::string measured = t.at("measured").dump();
    std::printf("%-4s %-34s measured %s\n", ok ? "ok" : "FAIL",
                t.at("name").get<std::string>().c_str(), measured.c_str());
  }
  std::printf("%s: %s -> %s\n", res.status == 0 ? "PASS" : "FAIL", name.c_str(),
              res.output_dir.c_str());
  return res.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral laboratory for the modified KdV equation"};
  app.require_subcommand(1);
  int rc = 0;

  for (const std::string& name : mkdv::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    auto config_path = std::make_shared<std::string>();
    sub->add_option("--config", *config_path, "key = value config file");
    auto opts =
        std::make_shared<std::vector<std::pair<std::string, std::shared_ptr<std::string>>>>();
    std::vector<FlagSpec> flags = kCommonFlags;
    for (const FlagSpec& f : extra_flags(name)) flags.push_back(f);
    for (const FlagSpec& f : flags) {
      auto storage = std::make_shared<std::string>();
      sub->add_option(f.flag, *storage, f.help);
      opts->push_back({f.key, storage});
    }
    sub->callback([name, config_path, opts, sub, &rc]() {
      std::vector<std::pair<std::string, std::string>> overrides;
      for (const auto& [key, storage] : *opts)
        if (!storage->empty()) overrides.push_back({key, *storage});
      (void)sub;
      rc = run_one(name, *config_path, overrides);
    });
  }

  {
    auto* sub = app.add_subcommand("verify", "re-check a report against the pinned bands");
    auto path = std::make_shared<std::string>();
    auto profile = std::make_shared<std::string>("default");
    sub->add_option("report", *path, "path to a *_report.json")->required();
    sub->add_option("--profile", *profile, "tolerance profile (default)");
    sub->callback([path, profile, &rc]() {
      const auto report = mkdv::load_json_file(*path);
      const mkdv::VerifyResult v = mkdv::verify_report(report, *profile);
      std::fputs(v.table.c_str(), stdout);
      std::printf("%s: %d checks, %d failed\n", v.pass ? "PASS" : "FAIL", v.checked, v.failed);
      rc = v.pass ? 0 : 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return rc;
}
