#include "mkdv/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

namespace {

using ordered_json = nlohmann::ordered_json;

class Checker {
 public:
  void band(const std::string& name, double measured, double target, double halfwidth) {
    const bool ok = std::isfinite(measured) && std::fabs(measured - target) <= halfwidth;
    line(name, measured, ok, "within %.4g of %.4g", halfwidth, target);
  }
  void max(const std::string& name, double measured, double bound) {
    const bool ok = std::isfinite(measured) && measured <= bound;
    line(name, measured, ok, "<= %.4g", bound, 0.0);
  }
  void min(const std::string& name, double measured, double bound) {
    const bool ok = std::isfinite(measured) && measured >= bound;
    line(name, measured, ok, ">= %.4g", bound, 0.0);
  }
  void flag(const std::string& name, bool ok) {
    line(name, ok ? 1.0 : 0.0, ok, "expected true", 0.0, 0.0);
  }

  VerifyResult finish() const {
    VerifyResult r;
    r.checked = checked_;
    r.failed = failed_;
    r.pass = failed_ == 0;
    r.table = table_;
    return r;
  }

 private:
  void line(const std::string& name, double measured, bool ok, const char* fmt, double a,
            double b) {
    ++checked_;
    if (!ok) ++failed_;
    char cond[64];
    std::snprintf(cond, sizeof cond, fmt, a, b);
    char buf[192];
    std::snprintf(buf, sizeof buf, "%-4s %-34s measured % .6g  (%s)\n", ok ? "ok" : "FAIL",
                  name.c_str(), measured, cond);
    table_ += buf;
  }

  std::string table_;
  int checked_ = 0;
  int failed_ = 0;
};

double get_num(const ordered_json& j, const std::string& a, const std::string& b = "",
               const std::string& c = "") {
  const ordered_json* p = &j;
  for (const std::string& key : {a, b, c}) {
    if (key.empty()) break;
    if (!p->contains(key)) throw MkdvError("verify: report is missing field '" + key + "'");
    p = &(*p)[key];
  }
  if (!p->is_number()) throw MkdvError("verify: field '" + a + "' is not numeric");
  return p->get<double>();
}

bool monotone_decreasing(const std::vector<double>& v, double slack = 1e-9) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i + 1] > v[i] * (1.0 + slack)) return false;
  return !v.empty();
}

void verify_decay(const ordered_json& r, Checker& c) {
  c.band("supnorm_decay_exponent", get_num(r, "metrics", "fitted_exponent"), -1.0 / 3.0, 0.05);
  c.band("scaled_supnorm_trend_slope", get_num(r, "metrics", "scaled_sup_slope"), 0.0, 0.02);
  c.max("mass_drift", get_num(r, "metrics", "mass_drift"), 1e-8);
  c.max("energy_drift", get_num(r, "metrics", "energy_drift"), 1e-8);
}

void verify_scattering(const ordered_json& r, Checker& c) {
  c.max("amplitude_variation_10_100", get_num(r, "metrics", "amplitude_variation_10_100"),
        0.02);
  c.max("phase_slope_rel_err", get_num(r, "metrics", "phase_slope_rel_err"), 0.10);
  const auto errs = r.at("region_errors").at("max_normalized").get<std::vector<double>>();
  c.flag("region_error_nonincreasing",
         errs.size() >= 2 && errs.back() <= errs.front() * (1.0 + 1e-9));
  std::vector<double> sup;
  for (const auto& p : r.at("cauchy_pairs")) sup.push_back(p.at("sup_diff").get<double>());
  c.flag("profile_cauchy_decreasing", monotone_decreasing(sup));
}

void verify_selfsimilar(const ordered_json& r, Checker& c) {
  c.max("ode_residual", get_num(r, "metrics", "ode_residual"), 1e-8);
  c.min("lambda_residual_ratio", get_num(r, "metrics", "residual_ratio"), 1e3);
  const auto diffs = r.at("collapse").at("sup_diff").get<std::vector<double>>();
  c.flag("collapse_decreasing", monotone_decreasing(diffs));
  c.max("error_trend_slope", get_num(r, "metrics", "error_trend_slope"), 0.02);
}

void verify_painleve(const ordered_json& r, Checker& c) {
  c.max("ode_residual", get_num(r, "metrics", "ode_residual"), 1e-8);
  c.max("airy_match", get_num(r, "metrics", "airy_match"), 1e-8);
  c.max("mass_error",
        std::fabs(get_num(r, "metrics", "mass") - get_num(r, "metrics", "mass_target")), 1e-5);
  c.min("lambda_residual_ratio",
        get_num(r, "metrics", "rejected_residual") /
            std::max(get_num(r, "metrics", "ansatz_residual"), 1e-300),
        1e3);
}

void verify_stability(const ordered_json& r, Checker& c) {
  c.max("constraint_max", get_num(r, "metrics", "constraint_max"), 1e-9);
  c.max("c_settle", get_num(r, "metrics", "c_settle"), 1e-3);
  c.max("v1_h1w_exponent", get_num(r, "fitted_exponents", "v1_h1w", "slope"), -1.0);
  c.max("virial_max_increase", get_num(r, "metrics", "virial_max_increase"), 1e-6);
}

void verify_semigroup(const ordered_json& r, Checker& c) {
  if (!r.contains("cases") || r.at("cases").empty())
    throw MkdvError("verify: semigroup report has no cases");
  for (const auto& k : r.at("cases")) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_a=%.2f", k.at("a").get<double>());
    c.min(std::string("decay_rate") + suffix, k.at("fitted_b").get<double>(), 1e-3);
    c.min(std::string("fit_r2") + suffix, k.at("fit_r2").get<double>(), 0.95);
    c.band(std::string("xi1_no_decay") + suffix, k.at("xi1_ratio").get<double>(), 1.0, 1.0);
  }
}

void verify_oscint(const ordered_json& r, Checker& c) {
  c.max("consistency_worst_ratio", get_num(r, "metrics", "consistency_worst_ratio"), 1.0);
  std::vector<double> rels;
  for (const auto& row : r.at("trend")) rels.push_back(row.at("rel_err").get<double>());
  bool strict = rels.size() >= 2;
  for (std::size_t i = 0; i + 1 < rels.size(); ++i) strict = strict && rels[i + 1] < rels[i];
  c.flag("leading_term_rel_err_decreasing", strict);
  c.min("osc_sign_correlation_ratio",
        get_num(r, "airy_constant", "corr_selected") /
            std::max(get_num(r, "airy_constant", "corr_rejected"), 1e-300),
        3.0);
  c.max("lemma_decay_slope", get_num(r, "lemma_decay", "fitted_slope"), -1.4);
}

}  // namespace

VerifyResult verify_report(const nlohmann::ordered_json& report, const std::string& profile) {
  if (profile != "default")
    throw MkdvError("verify: unknown profile '" + profile + "' (known: default)");
  if (!report.contains("schema") || report["schema"] != "mkdv-report/1")
    throw MkdvError("verify: not an mkdv-report/1 document");
  if (!report.contains("experiment") || !report["experiment"].is_string())
    throw MkdvError("verify: report has no experiment name");
  const std::string exp = report["experiment"].get<std::string>();

  Checker c;
  if (exp == "decay")
    verify_decay(report, c);
  else if (exp == "scattering")
    verify_scattering(report, c);
  else if (exp == "selfsimilar")
    verify_selfsimilar(report, c);
  else if (exp == "painleve")
    verify_painleve(report, c);
  else if (exp == "soliton_stability")
    verify_stability(report, c);
  else if (exp == "semigroup")
    verify_semigroup(report, c);
  else if (exp == "oscint_check")
    verify_oscint(report, c);
  else
    throw MkdvError("verify: unknown experiment '" + exp + "'");
  return c.finish();
}

}  // namespace mkdv
