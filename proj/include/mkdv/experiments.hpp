#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "mkdv/grid.hpp"

namespace mkdv {

// Flat key=value configuration. Files hold one `key = value` per line (#
// comments); CLI flags override file keys. Every key an experiment actually
// consumes is echoed, with its resolved value, into the output manifest.
class ExperimentConfig {
 public:
  std::string experiment;

  static ExperimentConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  void validate() const;  // experiment name + key whitelist + parseability

  // Typed access; the default is recorded (and echoed) when the key is absent.
  double num(const std::string& key, double dflt) const;
  int integer(const std::string& key, int dflt) const;
  std::string str(const std::string& key, const std::string& dflt) const;
  std::vector<double> num_list(const std::string& key, const std::string& dflt) const;

  const std::map<std::string, std::string>& consumed() const { return consumed_; }

 private:
  std::map<std::string, std::string> kv_;
  mutable std::map<std::string, std::string> consumed_;
};

struct ExperimentResult {
  int status = 0;
  std::string output_dir;
  nlohmann::ordered_json report;
};

const std::vector<std::string>& experiment_names();

// Runs one experiment end to end: evolves/solves, writes manifest.json,
// <experiment>_report.json, CSV dumps and SVG plots into the output dir.
// Throws MkdvError on validation failure; solver aborts mid-run still write
// a manifest flagged incomplete before the error propagates.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Deterministic seeded initial data on the grid. Shapes: gaussian, sech,
// random (sum of five seeded bumps). Amplitude eps, width w0, centre x0.
PhysicalField initial_data(const GridPtr& grid, const std::string& shape, double eps,
                           double w0, double x0, std::uint64_t seed);

std::vector<double> logspace(double a, double b, int m);

}  // namespace mkdv
