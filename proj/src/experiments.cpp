#include "mkdv/experiments.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>

#include "mkdv/evolve.hpp"
#include "mkdv/fit.hpp"
#include "mkdv/io.hpp"
#include "mkdv/kernels.hpp"
#include "mkdv/modulation.hpp"
#include "mkdv/oscint.hpp"
#include "mkdv/profile.hpp"
#include "mkdv/selfsimilar.hpp"
#include "mkdv/soliton.hpp"
#include "mkdv/spectral.hpp"
#include "mkdv/svg.hpp"

namespace mkdv {

using ordered_json = nlohmann::ordered_json;

namespace {

const std::set<std::string>& key_whitelist() {
  static const std::set<std::string> keys = {
      "n",       "L",        "dt",     "t_end",   "scheme",  "sign",   "eps",
      "w0",      "x0",       "shape",  "seed",    "out",     "m",      "c0",
      "a",       "gamma",    "mass",   "ode_tol", "xi_star", "probes", "t_list",
      "budget",  "snapshots"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw MkdvError("config: key '" + key + "' has non-numeric value '" + value + "'");
  }
}

// ---------------------------------------------------------------------------
// artifact helpers

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json target_band(const std::string& name, double measured, double target,
                         double band) {
  ordered_json t;
  t["name"] = name;
  t["measured"] = measured;
  t["target"] = target;
  t["band"] = band;
  t["pass"] = std::isfinite(measured) && std::fabs(measured - target) <= band;
  return t;
}

ordered_json target_max(const std::string& name, double measured, double bound) {
  ordered_json t;
  t["name"] = name;
  t["measured"] = measured;
  t["max"] = bound;
  t["pass"] = std::isfinite(measured) && measured <= bound;
  return t;
}

ordered_json target_min(const std::string& name, double measured, double bound) {
  ordered_json t;
  t["name"] = name;
  t["measured"] = measured;
  t["min"] = bound;
  t["pass"] = std::isfinite(measured) && measured >= bound;
  return t;
}

ordered_json target_flag(const std::string& name, bool ok) {
  ordered_json t;
  t["name"] = name;
  t["measured"] = ok;
  t["pass"] = ok;
  return t;
}

bool finalize_targets(ordered_json& report) {
  bool all = true;
  for (const auto& t : report["targets"]) all = all && t.at("pass").get<bool>();
  report["pass"] = all;
  return all;
}

// Evolution snapshots collected with conserved-drift and edge-mass monitors.
struct SnapSeries {
  GridPtr grid;
  std::vector<double> t;
  std::vector<SpectralField> uhat;
  Conserved base;
  double mass_drift = 0.0, energy_drift = 0.0, momentum_drift = 0.0;
  double edge_mass_max = 0.0;
};

SnapSeries evolve_collect(const PhysicalField& u0, const EvolveConfig& cfg) {
  SnapSeries out;
  out.grid = u0.grid;
  out.base = conserved_quantities(u0);
  const double mass_scale = std::max(out.base.mass, 1e-30);
  const double energy_scale = std::max(std::fabs(out.base.energy), 1e-30);
  const double mom_scale = std::max(std::fabs(out.base.momentum), 1e-30);
  run_evolution(u0, cfg, [&](double t, const SpectralField& uh) {
    if (!out.t.empty() && t <= out.t.back() + 1e-12) return;
    out.t.push_back(t);
    out.uhat.push_back(uh);
    const PhysicalField u = inverse_transform(uh);
    const Conserved c = conserved_quantities(u);
    out.mass_drift = std::max(out.mass_drift, std::fabs(c.mass - out.base.mass) / mass_scale);
    out.energy_drift =
        std::max(out.energy_drift, std::fabs(c.energy - out.base.energy) / energy_scale);
    out.momentum_drift =
        std::max(out.momentum_drift, std::fabs(c.momentum - out.base.momentum) / mom_scale);
    out.edge_mass_max = std::max(out.edge_mass_max, edge_mass_fraction(u));
  });
  return out;
}

std::size_t nearest_index(const std::vector<double>& ts, double t) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (std::fabs(ts[i] - t) < std::fabs(ts[best] - t)) best = i;
  return best;
}

int nearest_mode(const Grid& g, double xi) {
  int best = 0;
  for (int j = 0; j < g.n; ++j)
    if (std::fabs(g.k[j] - xi) < std::fabs(g.k[best] - xi)) best = j;
  return best;
}

std::vector<double> merge_times(std::initializer_list<std::vector<double>> lists) {
  std::vector<double> all;
  for (const auto& l : lists) all.insert(all.end(), l.begin(), l.end());
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  for (double t : all)
    if (out.empty() || t > out.back() * (1.0 + 1e-9) + 1e-12) out.push_back(t);
  return out;
}

// ---------------------------------------------------------------------------
// decay

ordered_json run_decay(const ExperimentConfig& cfg, const std::string& dir) {
  const int n = cfg.integer("n", 32768);
  const double L = cfg.num("L", 6400.0);
  const double dt = cfg.num("dt", 4e-3);
  const double t_end = cfg.num("t_end", 200.0);
  const double eps = cfg.num("eps", 0.1);
  const double w0 = cfg.num("w0", 2.0);
  const std::string shape = cfg.str("shape", "gaussian");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));

  const GridPtr g = make_grid(n, L);
  const PhysicalField u0 = initial_data(g, shape, eps, w0, cfg.num("x0", 0.0), seed);

  EvolveConfig ec;
  ec.dt = dt;
  ec.t_end = t_end;
  ec.snapshot_times = logspace(10.0, t_end, 25);
  const SnapSeries run = evolve_collect(u0, ec);

  CsvWriter csv(dir + "/decay_norms.csv",
                {"t", "sup_u", "sup_scaled_u", "sup_scaled_ux", "right_region", "bilinear",
                 "trilinear_0", "trilinear_04", "edge_mass"});
  std::vector<double> ts, sups, scaled;
  for (std::size_t i = 0; i < run.t.size(); ++i) {
    if (run.t[i] < 10.0 * (1.0 - 1e-9)) continue;
    const DiagnosticRow d = dispersive_diagnostics(run.uhat[i], run.t[i]);
    const PhysicalField u = inverse_transform(run.uhat[i]);
    const double sup = max_abs(u);
    csv.row({run.t[i], sup, d.sup_scaled_u, d.sup_scaled_ux, d.right_region, d.bilinear,
             d.trilinear_0, d.trilinear_04, edge_mass_fraction(u)});
    ts.push_back(run.t[i]);
    sups.push_back(sup);
    scaled.push_back(d.sup_scaled_u);
  }
  csv.close();

  const LinearFit expfit = loglog_fit(ts, sups);
  std::vector<double> log_t(ts.size()), log_scaled(scaled.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    log_t[i] = std::log(ts[i]);
    log_scaled[i] = std::log(scaled[i]);
  }
  const LinearFit scaled_fit = linear_fit(log_t, log_scaled);

  {
    char anno[96];
    std::snprintf(anno, sizeof anno, "fit slope %.4f (reference -1/3)", expfit.slope);
    SvgSeries data{ts, sups, "sup|u|"};
    SvgSeries ref{ts, {}, "slope -1/3"};
    for (double t : ts) ref.y.push_back(sups.front() * std::pow(t / ts.front(), -1.0 / 3.0));
    write_line_plot(dir + "/decay_supnorm.svg", {data, ref},
                    {"sup-norm decay", "t", "sup|u|", true, true, {anno}});
    SvgSeries sc{ts, scaled, "sup |u| t^(1/3) <x/t^(1/3)>^(1/4)"};
    char anno2[96];
    std::snprintf(anno2, sizeof anno2, "trend slope %.5f in log t", scaled_fit.slope);
    write_line_plot(dir + "/decay_scaled.svg", {sc},
                    {"scaled sup-norm functional", "t", "value", true, false, {anno2}});
  }

  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "decay";
  rep["metrics"] = {{"fitted_exponent", expfit.slope},
                    {"fitted_exponent_stderr", expfit.slope_stderr},
                    {"fit_r2", expfit.r2},
                    {"scaled_sup_slope", scaled_fit.slope},
                    {"mass_drift", run.mass_drift},
                    {"energy_drift", run.energy_drift},
                    {"momentum_drift", run.momentum_drift},
                    {"edge_mass_max", run.edge_mass_max}};
  rep["series"] = {{"t", ts}, {"sup_u", sups}, {"scaled_sup", scaled}};
  rep["targets"] = ordered_json::array();
  rep["targets"].push_back(
      target_band("supnorm_decay_exponent", expfit.slope, -1.0 / 3.0, 0.05));
  rep["targets"].push_back(target_band("scaled_supnorm_trend_slope", scaled_fit.slope, 0.0, 0.02));
  rep["targets"].push_back(target_max("mass_drift", run.mass_drift, 1e-8));
  rep["targets"].push_back(target_max("energy_drift", run.energy_drift, 1e-8));
  finalize_targets(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// scattering

struct ScatteringOut {
  ordered_json report;
  double edge_mass_max = 0.0;
};

ordered_json scattering_analysis(const SnapSeries& run, double xi_star, double gamma,
                                 const std::string& dir) {
  const Grid& g = *run.grid;

  ProfileTrack track;
  for (std::size_t i = 0; i < run.t.size(); ++i)
    if (run.t[i] >= 1.0 - 1e-12) track.push(run.t[i], extract_profile(run.uhat[i], run.t[i]));
  const PhaseTrack phases = accumulate_B(track);
  const double t_late = track.times.back();
  const AsymptoticProfile prof = estimate_f_infinity(track, phases, t_late, gamma);

  const int jstar = nearest_mode(g, xi_star);
  const double xi_used = g.k[jstar];

  // amplitude stability and unwrapped phase at xi*
  std::vector<double> fit_t, fit_logt, theta, absf;
  double prev_arg = 0.0, offset = 0.0;
  bool first = true;
  double amp_min = 0.0, amp_max = 0.0, amp_mean = 0.0;
  int amp_count = 0;
  CsvWriter phase_csv(dir + "/phase_fit.csv", {"t", "abs_f", "arg_f_unwrapped", "B"});
  for (std::size_t m = 0; m < track.times.size(); ++m) {
    const double t = track.times[m];
    const cplx f = track.profiles[m].c[jstar];
    const double a = std::arg(f);
    if (!first) {
      double d = a - prev_arg;
      while (d > M_PI) {
        d -= 2.0 * M_PI;
        offset -= 2.0 * M_PI;
      }
      while (d < -M_PI) {
        d += 2.0 * M_PI;
        offset += 2.0 * M_PI;
      }
    }
    first = false;
    prev_arg = a;
    const double th = a + offset;
    phase_csv.row({t, std::abs(f), th, phases.B[m][jstar]});
    if (t >= 10.0 * (1.0 - 1e-9)) {
      fit_t.push_back(t);
      fit_logt.push_back(std::log(t));
      theta.push_back(th);
      absf.push_back(std::abs(f));
      if (t <= 100.0 * (1.0 + 1e-9)) {
        amp_min = amp_count ? std::min(amp_min, std::abs(f)) : std::abs(f);
        amp_max = amp_count ? std::max(amp_max, std::abs(f)) : std::abs(f);
        amp_mean += std::abs(f);
        ++amp_count;
      }
    }
  }
  phase_csv.close();
  amp_mean /= std::max(amp_count, 1);
  const double amp_variation = (amp_max - amp_min) / std::max(amp_max, 1e-300);

  const LinearFit phase_fit = linear_fit(fit_logt, theta);
  double f2_mean = 0.0;
  for (double a : absf) f2_mean += a * a;
  f2_mean /= std::max<std::size_t>(absf.size(), 1);
  // the resonance set carries three stationary points; a single point's share
  // of the log-phase rate (the constant a hand count that misses the other
  // two would give) is +f2/6, recorded for transparency
  const double slope_model = -0.5 * f2_mean;
  const double slope_single = f2_mean / 6.0;
  const double slope_rel_err = std::fabs(phase_fit.slope - slope_model) /
                               std::max(std::fabs(slope_model), 1e-300);
  const double slope_rel_err_single = std::fabs(phase_fit.slope - slope_single) /
                                      std::max(std::fabs(slope_single), 1e-300);

  // modified-scattering region errors at the archival times
  std::vector<double> region_ts;
  for (double target : {100.0, 200.0, 400.0}) {
    const std::size_t i = nearest_index(run.t, target);
    if (run.t[i] >= 50.0 && (region_ts.empty() || run.t[i] > region_ts.back()))
      region_ts.push_back(run.t[i]);
  }
  std::vector<double> region_err;
  std::vector<std::string> strip_labels;
  std::vector<std::vector<double>> strip_rows;
  std::vector<double> strip_x;
  for (double t : region_ts) {
    const std::size_t i = nearest_index(run.t, t);
    const RegionErrorTable table = check_modified_scattering(run.uhat[i], run.t[i], prof, gamma);
    region_err.push_back(table.max_normalized);
    char lab[32];
    std::snprintf(lab, sizeof lab, "t=%.0f", run.t[i]);
    strip_labels.push_back(lab);
    std::vector<double> rowvals;
    for (const auto& r : table.rows) rowvals.push_back(r.err_normalized);
    strip_rows.push_back(rowvals);
    if (strip_x.empty())
      for (const auto& r : table.rows) strip_x.push_back(r.x);
    if (t == region_ts.back()) {
      CsvWriter csv(dir + "/region_error.csv",
                    {"t", "x", "xi0", "u_num", "u_pred", "err", "err_normalized"});
      for (const auto& r : table.rows)
        csv.row({table.t, r.x, r.xi0, r.u_num, r.u_pred, r.err, r.err_normalized});
    }
  }
  const bool region_nonincreasing =
      region_err.size() >= 2 && region_err.back() <= region_err.front() * (1.0 + 1e-9);

  // long-format profile dump, thinned
  {
    CsvWriter csv(dir + "/profile_long.csv", {"t", "xi", "abs_f", "arg_f", "B"});
    const int stride = std::max(1, g.n / 8192);
    for (std::size_t m = 0; m < track.times.size(); m += 4) {
      for (int j = 0; j < g.n; j += stride) {
        if (std::fabs(g.k[j]) > 4.0) continue;
        const cplx f = track.profiles[m].c[j];
        csv.row({track.times[m], g.k[j], std::abs(f), std::arg(f), phases.B[m][j]});
      }
    }
  }

  // plots
  {
    std::vector<SvgSeries> overlay;
    for (double t : {track.times.front(), 20.0, 100.0, t_late}) {
      const std::size_t m = nearest_index(track.times, t);
      SvgSeries s;
      char lab[32];
      std::snprintf(lab, sizeof lab, "t=%.0f", track.times[m]);
      s.label = lab;
      const int stride = std::max(1, g.n / 4096);
      for (int j = g.n / 2; j < g.n; j += stride) {  // negative-k half
        if (g.k[j] < -3.0) continue;
        s.x.push_back(g.k[j]);
        s.y.push_back(std::abs(track.profiles[m].c[j]));
      }
      for (int j = 0; j < g.n / 2; j += stride) {
        if (g.k[j] > 3.0) break;
        s.x.push_back(g.k[j]);
        s.y.push_back(std::abs(track.profiles[m].c[j]));
      }
      overlay.push_back(std::move(s));
    }
    write_line_plot(dir + "/fhat_overlay.svg", overlay,
                    {"|f(t,k)| overlay", "k", "|f|", false, false, {}});

    char anno[128];
    std::snprintf(anno, sizeof anno, "slope %.5f vs -|f|^2/2 = %.5f (single-point +|f|^2/6 = %.5f)",
                  phase_fit.slope, slope_model, slope_single);
    write_line_plot(dir + "/phase_slope.svg", {{fit_t, theta, "arg f(t, xi*)"}},
                    {"phase drift at xi*", "t", "unwrapped arg f", true, false, {anno}});
    if (!strip_rows.empty() && !strip_x.empty()) {
      double vmax = 0.0;
      for (const auto& row : strip_rows)
        for (double v : row) vmax = std::max(vmax, v);
      write_heat_strip(dir + "/region_error.svg", strip_labels, strip_x, strip_rows,
                       std::max(vmax, 1e-12), {"normalized region error", "x", "", false,
                                               false, {}});
    }
  }

  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "scattering";
  rep["metrics"] = {{"xi_star", xi_used},
                    {"amplitude_variation_10_100", amp_variation},
                    {"amplitude_mean_10_100", amp_mean},
                    {"phase_slope", phase_fit.slope},
                    {"phase_slope_model", slope_model},
                    {"phase_slope_rel_err", slope_rel_err},
                    {"phase_slope_single_point_model", slope_single},
                    {"phase_slope_single_point_rel_err", slope_rel_err_single},
                    {"f2_mean", f2_mean},
                    {"t_late", t_late},
                    {"cauchy_decreasing", prof.cauchy_decreasing}};
  rep["region_errors"] = {{"t", region_ts}, {"max_normalized", region_err}};
  {
    ordered_json cauchy = ordered_json::array();
    for (const auto& p : prof.cauchy)
      cauchy.push_back({{"t1", p.t1}, {"t2", p.t2}, {"sup_diff", p.sup_diff}});
    rep["cauchy_pairs"] = cauchy;
  }
  rep["targets"] = ordered_json::array();
  rep["targets"].push_back(target_max("amplitude_variation_10_100", amp_variation, 0.02));
  rep["targets"].push_back(target_max("phase_slope_rel_err", slope_rel_err, 0.10));
  rep["targets"].push_back(target_flag("region_error_nonincreasing", region_nonincreasing));
  rep["targets"].push_back(target_flag("profile_cauchy_decreasing", prof.cauchy_decreasing));
  finalize_targets(rep);
  return rep;
}

ordered_json run_scattering(const ExperimentConfig& cfg, const std::string& dir,
                            double* edge_mass) {
  const int n = cfg.integer("n", 65536);
  const double L = cfg.num("L", 12800.0);
  const double dt = cfg.num("dt", 6e-3);
  const double t_end = cfg.num("t_end", 400.0);
  const double eps = cfg.num("eps", 0.1);
  const double w0 = cfg.num("w0", 1.25);
  const double xi_star = cfg.num("xi_star", 1.0);
  const double gamma = cfg.num("gamma", 0.05);
  const std::string shape = cfg.str("shape", "gaussian");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));

  const GridPtr g = make_grid(n, L);
  const PhysicalField u0 = initial_data(g, shape, eps, w0, cfg.num("x0", 0.0), seed);

  EvolveConfig ec;
  ec.dt = dt;
  ec.t_end = t_end;
  ec.snapshot_times = merge_times({{1.0}, logspace(1.0, t_end, 64), {100.0, 200.0, t_end}});
  const SnapSeries run = evolve_collect(u0, ec);
  *edge_mass = run.edge_mass_max;
  return scattering_analysis(run, xi_star, gamma, dir);
}

// ---------------------------------------------------------------------------
// self-similar

ordered_json selfsimilar_analysis(const std::vector<double>& ts,
                                  const std::vector<PhysicalField>& snaps, double mass,
                                  double gamma, double ode_tol, const std::string& dir) {
  const PainleveSolution phi = solve_painleve(mass, ode_tol);

  std::vector<std::pair<double, PhysicalField>> pairs;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= 20.0 * (1.0 - 1e-9)) pairs.push_back({ts[i], snaps[i]});
  const std::vector<SelfSimilarErrorRow> errs = compare_self_similar(pairs, phi, gamma);

  // collapse of rescaled profiles on |xi| <= 3
  std::vector<double> collapse_t1, collapse_t2, collapse_diff;
  {
    std::vector<std::size_t> idx;
    for (double target : {50.0, 100.0, 200.0}) {
      const std::size_t i = nearest_index(ts, target);
      if (idx.empty() || i != idx.back()) idx.push_back(i);
    }
    std::vector<SelfSimilarSnapshot> resc;
    for (std::size_t i : idx) resc.push_back(rescale(snaps[i], ts[i], -3.0, 3.0, 513));
    for (std::size_t p = 0; p + 1 < resc.size(); ++p) {
      double sup = 0.0;
      for (std::size_t q = 0; q < resc[p].v.size(); ++q)
        sup = std::max(sup, std::fabs(resc[p].v[q] - resc[p + 1].v[q]));
      collapse_t1.push_back(resc[p].t);
      collapse_t2.push_back(resc[p + 1].t);
      collapse_diff.push_back(sup);
    }
  }
  bool collapse_decreasing = true;
  for (std::size_t p = 0; p + 1 < collapse_diff.size(); ++p)
    collapse_decreasing = collapse_decreasing &&
                          collapse_diff[p + 1] <= collapse_diff[p] * (1.0 + 1e-9);

  std::vector<double> err_t, err_norm;
  {
    CsvWriter csv(dir + "/selfsimilar_error.csv",
                  {"t", "region_halfwidth", "sup_error", "normalized_error"});
    for (const auto& r : errs) {
      csv.row({r.t, r.region_halfwidth, r.sup_error, r.normalized_error});
      err_t.push_back(r.t);
      err_norm.push_back(r.normalized_error);
    }
  }
  LinearFit err_fit;
  if (err_t.size() >= 3) err_fit = loglog_fit(err_t, err_norm);

  {
    CsvWriter csv(dir + "/painleve_profile.csv", {"xi", "phi"});
    for (std::size_t i = 0; i < phi.xi.size(); ++i) csv.row({phi.xi[i], phi.phi[i]});
  }
  {
    std::vector<SvgSeries> overlay;
    SvgSeries ode;
    ode.label = "Painleve II profile";
    for (std::size_t i = 0; i < phi.xi.size(); i += 8)
      if (phi.xi[i] >= -8.0 && phi.xi[i] <= 6.0) {
        ode.x.push_back(phi.xi[i]);
        ode.y.push_back(phi.phi[i]);
      }
    overlay.push_back(std::move(ode));
    for (double target : {50.0, 200.0}) {
      const std::size_t i = nearest_index(ts, target);
      const SelfSimilarSnapshot s = rescale(snaps[i], ts[i], -8.0, 6.0, 449);
      SvgSeries ss;
      char lab[48];
      std::snprintf(lab, sizeof lab, "t^(1/3) u at t=%.0f", ts[i]);
      ss.label = lab;
      ss.x = s.xi;
      ss.y = s.v;
      overlay.push_back(std::move(ss));
    }
    write_line_plot(dir + "/painleve_overlay.svg", overlay,
                    {"self-similar profile vs Painleve II", "xi = x/t^(1/3)", "t^(1/3) u",
                     false, false, {}});
    char anno[96];
    std::snprintf(anno, sizeof anno, "log-log trend slope %.4f", err_fit.slope);
    write_line_plot(dir + "/selfsimilar_error.svg", {{err_t, err_norm, "normalized sup error"}},
                    {"self-similar region error", "t", "sup error / t^(-1/3-3g/2)", true, true,
                     {anno}});
  }

  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "selfsimilar";
  rep["metrics"] = {{"mass", mass},
                    {"lambda", phi.lambda},
                    {"shooting_k", phi.k},
                    {"ode_residual", phi.ode_residual},
                    {"airy_match", phi.airy_match},
                    {"secant_iters", phi.secant_iters},
                    {"ansatz_residual", phi.selected_residual},
                    {"rejected_lambda", phi.rejected_lambda},
                    {"rejected_residual", phi.rejected_residual},
                    {"residual_ratio", phi.rejected_residual / std::max(phi.selected_residual, 1e-300)},
                    {"error_trend_slope", err_fit.slope},
                    {"normalized_error_max", err_norm.empty() ? 0.0 : *std::max_element(err_norm.begin(), err_norm.end())}};
  rep["series"] = {{"t", err_t}, {"normalized_error", err_norm}};
  rep["collapse"] = {{"t1", collapse_t1}, {"t2", collapse_t2}, {"sup_diff", collapse_diff}};
  rep["targets"] = ordered_json::array();
  rep["targets"].push_back(target_max("ode_residual", phi.ode_residual, ode_tol));
  rep["targets"].push_back(target_min(
      "lambda_residual_ratio", phi.rejected_residual / std::max(phi.selected_residual, 1e-300),
      1e3));
  rep["targets"].push_back(target_flag("collapse_decreasing", collapse_decreasing));
  rep["targets"].push_back(target_max("error_trend_slope", err_fit.slope, 0.02));
  finalize_targets(rep);
  return rep;
}

ordered_json run_selfsimilar(const ExperimentConfig& cfg, const std::string& dir,
                             double* edge_mass) {
  const int n = cfg.integer("n", 65536);
  const double L = cfg.num("L", 12800.0);
  const double dt = cfg.num("dt", 6e-3);
  const double t_end = cfg.num("t_end", 400.0);
  const double eps = cfg.num("eps", 0.1);
  const double w0 = cfg.num("w0", 2.0);
  const double gamma = cfg.num("gamma", 0.05);
  const double ode_tol = cfg.num("ode_tol", 1e-8);
  const std::string shape = cfg.str("shape", "gaussian");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));

  const GridPtr g = make_grid(n, L);
  const PhysicalField u0 = initial_data(g, shape, eps, w0, cfg.num("x0", 0.0), seed);
  const double mass = conserved_quantities(u0).momentum;

  EvolveConfig ec;
  ec.dt = dt;
  ec.t_end = t_end;
  ec.snapshot_times = merge_times({logspace(20.0, t_end, 12), {50.0, 100.0, 200.0}});
  const SnapSeries run = evolve_collect(u0, ec);
  *edge_mass = run.edge_mass_max;

  std::vector<PhysicalField> snaps;
  snaps.reserve(run.uhat.size());
  for (const auto& uh : run.uhat) snaps.push_back(inverse_transform(uh));
  return selfsimilar_analysis(run.t, snaps, mass, gamma, ode_tol, dir);
}

// ---------------------------------------------------------------------------
// painleve (standalone ODE solve)

ordered_json run_painleve(const ExperimentConfig& cfg, const std::string& dir) {
  const double mass = cfg.num("mass", 0.3);
  const double ode_tol = cfg.num("ode_tol", 1e-8);
  const PainleveSolution phi = solve_painleve(mass, ode_tol);
  {
    CsvWriter csv(dir + "/painleve_profile.csv", {"xi", "phi"});
    for (std::size_t i = 0; i < phi.xi.size(); ++i) csv.row({phi.xi[i], phi.phi[i]});
  }
  {
    SvgSeries s;
    s.label = "phi";
    for (std::size_t i = 0; i < phi.xi.size(); i += 4) {
      s.x.push_back(phi.xi[i]);
      s.y.push_back(phi.phi[i]);
    }
    char anno[128];
    std::snprintf(anno, sizeof anno, "lambda=%.6g k=%.6g mass=%.6g", phi.lambda, phi.k,
                  phi.mass);
    write_line_plot(dir + "/painleve.svg", {s},
                    {"Painleve II profile", "xi", "phi", false, false, {anno}});
  }
  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "painleve";
  rep["metrics"] = {{"mass_target", mass},
                    {"mass", phi.mass},
                    {"lambda", phi.lambda},
                    {"shooting_k", phi.k},
                    {"ode_residual", phi.ode_residual},
                    {"airy_match", phi.airy_match},
                    {"secant_iters", phi.secant_iters},
                    {"ansatz_residual", phi.selected_residual},
                    {"rejected_lambda", phi.rejected_lambda},
                    {"rejected_residual", phi.rejected_residual}};
  rep["targets"] = ordered_json::array();
  rep["targets"].push_back(target_max("ode_residual", phi.ode_residual, ode_tol));
  rep["targets"].push_back(target_max("airy_match", phi.airy_match, 1e-8));
  rep["targets"].push_back(target_max("mass_error", std::fabs(phi.mass - mass), 1e-5));
  rep["targets"].push_back(target_min(
      "lambda_residual_ratio", phi.rejected_residual / std::max(phi.selected_residual, 1e-300),
      1e3));
  finalize_targets(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// soliton stability

ordered_json run_soliton_stability(const ExperimentConfig& cfg, const std::string& dir) {
  const int n = cfg.integer("n", 4096);
  const double L = cfg.num("L", 800.0);
  const double dt = cfg.num("dt", 2e-3);
  const double T = cfg.num("t_end", 100.0);
  const double eps = cfg.num("eps", 0.05);
  const double w0 = cfg.num("w0", 1.0);
  const double c0 = cfg.num("c0", 1.0);
  const double m = cfg.num("m", 1.6);
  const int snapshots = cfg.integer("snapshots", 100);
  const std::string shape = cfg.str("shape", "gaussian");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));

  const GridPtr g = make_grid(n, L);
  const PhysicalField v0 = initial_data(g, shape, eps, w0, cfg.num("x0", 0.0), seed);

  StabilityParams params;
  params.dt = dt;
  params.snapshots = snapshots;
  const StabilityReport rep0 = stability_experiment(c0, v0, T, m, params);

  const auto& tt = rep0.track.times;
  {
    std::vector<std::string> cols = {"t", "c", "h", "constraint_residual"};
    for (const auto& [name, series] : rep0.norms) {
      (void)series;
      cols.push_back(name);
    }
    CsvWriter csv(dir + "/stability_norms.csv", cols);
    for (std::size_t k = 0; k < tt.size(); ++k) {
      std::vector<double> row = {tt[k], rep0.track.c[k], rep0.track.h[k],
                                 rep0.track.constraint_residuals[k]};
      for (const auto& [name, series] : rep0.norms) {
        (void)name;
        row.push_back(series[k]);
      }
      csv.row(row);
    }
  }
  double constraint_max = 0.0;
  for (double r : rep0.track.constraint_residuals) constraint_max = std::max(constraint_max, r);
  const std::size_t iT = nearest_index(tt, T), iT2 = nearest_index(tt, T / 2);
  const double c_settle = std::fabs(rep0.track.c[iT] - rep0.track.c[iT2]);
  const double v1_exponent = rep0.fitted_exponents.at("v1_h1w").first;
  const double v1_r2 = rep0.fitted_exponents.at("v1_h1w").second;

  {
    write_line_plot(dir + "/stability_c.svg", {{tt, rep0.track.c, "c(t)"}},
                    {"modulation speed", "t", "c", false, false, {}});
    std::vector<SvgSeries> ns;
    for (const auto& [name, series] : rep0.norms) ns.push_back({tt, series, name});
    char anno[96];
    std::snprintf(anno, sizeof anno, "v1_h1w tail exponent %.3f (r2 %.3f)", v1_exponent, v1_r2);
    write_line_plot(dir + "/stability_norms.svg", ns,
                    {"perturbation norms", "t", "norm", true, true, {anno}});
    write_line_plot(dir + "/stability_virial.svg",
                    {{tt, rep0.virial_ledger, "int chi (v1^2 + v1_y^2)"}},
                    {"virial ledger", "t", "value", false, false, {}});
  }

  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "soliton_stability";
  rep["metrics"] = {{"c0", c0},
                    {"m", m},
                    {"eps", eps},
                    {"c_plus", rep0.c_plus},
                    {"h_plus", rep0.h_plus},
                    {"constraint_max", constraint_max},
                    {"c_settle", c_settle},
                    {"virial_max_increase", rep0.virial_max_increase}};
  {
    ordered_json fits;
    for (const auto& [name, sr] : rep0.fitted_exponents)
      fits[name] = {{"slope", sr.first}, {"r2", sr.second}};
    rep["fitted_exponents"] = fits;
    rep["track"] = {{"t", tt}, {"c", rep0.track.c}, {"h", rep0.track.h}};
  }
  rep["targets"] = ordered_json::array();
  rep["targets"].push_back(target_max("constraint_max", constraint_max, 1e-9));
  rep["targets"].push_back(target_max("c_settle", c_settle, 1e-3));
  rep["targets"].push_back(target_max("v1_h1w_exponent", v1_exponent, -1.0));
  rep["targets"].push_back(target_max("virial_max_increase", rep0.virial_max_increase, 1e-6));
  finalize_targets(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// semigroup

ordered_json run_semigroup(const ExperimentConfig& cfg, const std::string& dir) {
  const int n = cfg.integer("n", 2048);
  const double L = cfg.num("L", 200.0);
  const double dt = cfg.num("dt", 1e-3);
  const double T = cfg.num("t_end", 20.0);
  const double c0 = cfg.num("c0", 1.0);
  const double w0 = cfg.num("w0", 1.5);
  const std::vector<double> a_list = cfg.num_list("a", "0.3,0.5");
  const std::string shape = cfg.str("shape", "gaussian");
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.integer("seed", 1));

  const GridPtr g = make_grid(n, L);
  const PhysicalField v0 = initial_data(g, shape, 1.0, w0, cfg.num("x0", -3.0), seed);
  const PhysicalField xi1 = eval_dQ_dy({c0, 0.0}, g);

  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "semigroup";
  rep["metrics"] = {{"c0", c0}, {"t_end", T}};
  rep["cases"] = ordered_json::array();
  rep["targets"] = ordered_json::array();

  std::vector<SvgSeries> plot;
  for (double a : a_list) {
    const DecayReport dr = semigroup_decay_experiment(c0, a, v0, T, dt);

    // unprojected kernel-mode control: xi1 spans the Jordan block, so its
    // weighted norm must hold steady instead of decaying
    EvolveConfig ec;
    ec.dt = dt;
    ec.t_end = T;
    ec.weight_a = a;
    ec.snapshot_times = logspace(T / 20.0, T, 10);
    const std::vector<RunState> control = evolve_linearized(xi1, c0, ec);
    const double nz0 = l2_norm(control.front().u);
    const double nzT = l2_norm(control.back().u);
    const double xi1_ratio = nzT / std::max(nz0, 1e-300);

    double leak_max = 0.0;
    for (double l : dr.leakage) leak_max = std::max(leak_max, l);

    char key[32];
    std::snprintf(key, sizeof key, "a=%.2f", a);
    {
      char lab[96];
      std::snprintf(lab, sizeof lab, "projected %s (b=%.3f)", key, dr.fitted_b);
      plot.push_back({dr.times, dr.weighted_norms, lab});
    }
    CsvWriter csv(dir + "/semigroup_" + std::to_string(a).substr(0, 4) + ".csv",
                  {"t", "weighted_norm", "leakage"});
    for (std::size_t i = 0; i < dr.times.size(); ++i)
      csv.row({dr.times[i], dr.weighted_norms[i], dr.leakage[i]});

    ordered_json c;
    c["a"] = a;
    c["fitted_b"] = dr.fitted_b;
    c["fit_r2"] = dr.fit_r2;
    c["leakage_max"] = leak_max;
    c["xi1_ratio"] = xi1_ratio;
    rep["cases"].push_back(c);

    rep["targets"].push_back(target_min(std::string("decay_rate_") + key, dr.fitted_b, 1e-3));
    rep["targets"].push_back(target_min(std::string("fit_r2_") + key, dr.fit_r2, 0.95));
    rep["targets"].push_back(
        target_band(std::string("xi1_no_decay_") + key, xi1_ratio, 1.0, 1.0));
  }
  write_line_plot(dir + "/semigroup_decay.svg", plot,
                  {"weighted semigroup decay", "t", "||v||_{L2_a}", false, true, {}});
  finalize_targets(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// oscint check

ordered_json run_oscint_check(const ExperimentConfig& cfg, const std::string& dir,
                              double* edge_mass) {
  const long budget = static_cast<long>(cfg.num("budget", 3e8));
  const std::vector<double> t_list = cfg.num_list("t_list", "20,80,320");
  const std::vector<double> probes = cfg.num_list("probes", "0.5,1.0");

  ordered_json rep;
  rep["schema"] = "mkdv-report/1";
  rep["experiment"] = "oscint_check";
  rep["targets"] = ordered_json::array();

  // --- consistency against the solver at t = 5 --------------------------
  {
    const int n = cfg.integer("n", 4096);
    const double L = cfg.num("L", 400.0);
    const double dt = cfg.num("dt", 2.5e-4);
    const double eps = cfg.num("eps", 0.4);
    const double w0 = cfg.num("w0", 1.0);
    const double t_mid = 5.0, delta = 2.0 * dt;
    const GridPtr g = make_grid(n, L);
    const PhysicalField u0 =
        initial_data(g, cfg.str("shape", "gaussian"), eps, w0, cfg.num("x0", 0.0),
                     static_cast<std::uint64_t>(cfg.integer("seed", 1)));
    EvolveConfig ec;
    ec.dt = dt;
    ec.t_end = t_mid + delta;
    ec.snapshot_times = {t_mid - delta, t_mid, t_mid + delta};
    const SnapSeries run = evolve_collect(u0, ec);
    *edge_mass = run.edge_mass_max;
    const std::size_t im = nearest_index(run.t, t_mid);
    const SpectralField fm = extract_profile(run.uhat[im - 1], run.t[im - 1]);
    const SpectralField f0 = extract_profile(run.uhat[im], run.t[im]);
    const SpectralField fp = extract_profile(run.uhat[im + 1], run.t[im + 1]);

    ordered_json rows = ordered_json::array();
    double scale = 0.0;
    std::vector<QuadResult> quads;
    std::vector<cplx> fds;
    std::vector<double> xs;
    for (double p : probes) {
      const int j = nearest_mode(*g, p);
      const cplx fd = (fp.c[j] - fm.c[j]) / (2.0 * delta);
      const QuadResult q = dtf_quadrature(f0, run.t[im], g->k[j], budget);
      scale = std::max(scale, std::abs(q.value));
      quads.push_back(q);
      fds.push_back(fd);
      xs.push_back(g->k[j]);
    }
    bool all_ok = true;
    double worst_ratio = 0.0;
    for (std::size_t i = 0; i < quads.size(); ++i) {
      const double diff = std::abs(quads[i].value - fds[i]);
      const double tol = std::max(1e-4 * scale, 3.0 * quads[i].est_error);
      all_ok = all_ok && diff <= tol;
      worst_ratio = std::max(worst_ratio, diff / tol);
      rows.push_back({{"xi", xs[i]},
                      {"quad_re", quads[i].value.real()},
                      {"quad_im", quads[i].value.imag()},
                      {"fd_re", fds[i].real()},
                      {"fd_im", fds[i].imag()},
                      {"diff", diff},
                      {"tol", tol},
                      {"quad_cells", quads[i].cells}});
    }
    rep["consistency"] = {{"t", run.t[im]}, {"delta", delta}, {"rows", rows}};
    rep["targets"].push_back(target_flag("solver_consistency", all_ok));
    rep["metrics"] = {{"consistency_worst_ratio", worst_ratio}};
  }

  // --- leading-term trend on a synthetic profile ------------------------
  {
    const GridPtr g = make_grid(16384, 3200.0);
    SpectralField f(g);
    const double w = cfg.num("profile_w", 0.35);
    for (int j = 0; j < g->n; ++j)
      f.c[j] = std::exp(-g->k[j] * g->k[j] / (2.0 * w * w));
    hermitize(f);
    const double xi = cfg.num("xi_star", 0.6);

    std::vector<double> rels;
    CsvWriter csv(dir + "/oscint_trend.csv", {"t", "rel_err", "cells", "est_error"});
    ordered_json rows = ordered_json::array();
    for (double t : t_list) {
      const QuadResult q = dtf_quadrature(f, t, xi, budget);
      const DtfAsymptotic a = dtf_asymptotic(f, t, xi);
      const double rel = std::abs(q.value - (a.resonant + a.airy)) / std::abs(a.resonant);
      rels.push_back(rel);
      csv.row({t, rel, static_cast<double>(q.cells), q.est_error});
      rows.push_back({{"t", t}, {"rel_err", rel}, {"cells", q.cells}});
    }
    csv.close();
    bool decreasing = true;
    for (std::size_t i = 0; i + 1 < rels.size(); ++i)
      decreasing = decreasing && rels[i + 1] < rels[i];

    double corr_m = 0.0, corr_p = 0.0;
    const int sign = resolve_airy_phase_sign(f, xi, {20.0, 28.0, 36.0, 44.0, 52.0, 60.0},
                                             &corr_m, &corr_p, budget);
    const DtfAsymptotic a1 = dtf_asymptotic(f, t_list.front(), xi, sign);
    rep["trend"] = rows;
    rep["airy_constant"] = {{"c_re", a1.c.real()},
                            {"c_im", a1.c.imag()},
                            {"c_abs", std::abs(a1.c)},
                            {"osc_sign", sign},
                            {"corr_selected", std::max(corr_m, corr_p)},
                            {"corr_rejected", std::min(corr_m, corr_p)}};
    rep["targets"].push_back(target_flag("leading_term_rel_err_decreasing", decreasing));
    rep["targets"].push_back(target_min(
        "osc_sign_correlation_ratio",
        std::max(corr_m, corr_p) / std::max(std::min(corr_m, corr_p), 1e-300), 3.0));

    write_line_plot(dir + "/oscint_trend.svg", {{t_list, rels, "rel err"}},
                    {"leading-term agreement", "t", "|quad - leading| / |resonant|", true,
                     true, {}});
  }

  // --- stationary-phase lemma: no-critical-point decay -------------------
  {
    const std::vector<double> lambdas = cfg.num_list("lemma_lambdas", "100,1000,10000");
    Phase2dSpec phase;
    phase.psi = [](double e, double s) { return e + s; };
    phase.grad = [](double, double) { return std::array<double, 2>{1.0, 1.0}; };
    phase.has_critical_point = false;
    auto tent = [](double u) { return std::fabs(u) < 1.0 ? 1.0 - std::fabs(u) : 0.0; };
    const StationaryPhase2dResult r = stationary_phase_2d(
        phase, [&](double e, double s) { return tent(e) * tent(s); },
        {-1.0, 1.0, -1.0, 1.0}, lambdas, budget);
    std::vector<double> vals;
    for (const auto& p : r.ladder) vals.push_back(std::abs(p.quadrature));
    const LinearFit slope = loglog_fit(lambdas, vals);
    rep["lemma_decay"] = {{"lambdas", lambdas}, {"values", vals}, {"fitted_slope", slope.slope}};
    rep["targets"].push_back(target_max("lemma_decay_slope", slope.slope, -1.4));
  }
  finalize_targets(rep);
  return rep;
}

}  // namespace

// ---------------------------------------------------------------------------
// config plumbing

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MkdvError("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw MkdvError("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "experiment")
      cfg.experiment = value;
    else
      cfg.set(key, value);
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    throw MkdvError("config: unknown experiment '" + experiment + "' (known: " + known + ")");
  }
  for (const auto& [k, v] : kv_) {
    (void)v;
    if (!key_whitelist().count(k) && k != "lemma_lambdas" && k != "profile_w")
      throw MkdvError("config: unknown key '" + k + "'");
  }
}

double ExperimentConfig::num(const std::string& key, double dflt) const {
  const auto it = kv_.find(key);
  const double v = it == kv_.end() ? dflt : parse_num(key, it->second);
  consumed_[key] = format_double(v);
  return v;
}

int ExperimentConfig::integer(const std::string& key, int dflt) const {
  const double v = num(key, dflt);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) throw MkdvError("config: key '" + key + "' must be integral");
  consumed_[key] = std::to_string(i);
  return i;
}

std::string ExperimentConfig::str(const std::string& key, const std::string& dflt) const {
  const auto it = kv_.find(key);
  const std::string v = it == kv_.end() ? dflt : it->second;
  consumed_[key] = v;
  return v;
}

std::vector<double> ExperimentConfig::num_list(const std::string& key,
                                               const std::string& dflt) const {
  const auto it = kv_.find(key);
  const std::string raw = it == kv_.end() ? dflt : it->second;
  consumed_[key] = raw;
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const auto comma = raw.find(',', pos);
    const std::string tok = trim(raw.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos));
    if (!tok.empty()) out.push_back(parse_num(key, tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw MkdvError("config: key '" + key + "' needs at least one value");
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "decay",   "scattering", "selfsimilar", "painleve", "soliton_stability",
      "semigroup", "oscint_check"};
  return names;
}

PhysicalField initial_data(const GridPtr& grid, const std::string& shape, double eps,
                           double w0, double x0, std::uint64_t seed) {
  if (!(w0 > 0.0)) throw MkdvError("initial data needs w0 > 0");
  PhysicalField u(grid);
  const Grid& g = *grid;
  if (shape == "gaussian") {
    for (int i = 0; i < g.n; ++i) {
      const double z = (g.x[i] - x0) / w0;
      u.v[i] = eps * std::exp(-0.5 * z * z);
    }
  } else if (shape == "sech") {
    for (int i = 0; i < g.n; ++i) u.v[i] = eps / std::cosh((g.x[i] - x0) / w0);
  } else if (shape == "random") {
    // five seeded bumps; raw 64-bit draws mapped to [0,1) keep the stream
    // identical across standard libraries
    std::uint64_t s = seed ? seed : 0x9e3779b97f4a7c15ULL;
    auto next = [&]() {
      s += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = s;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
    };
    for (int b = 0; b < 5; ++b) {
      const double amp = eps * (0.4 + 0.6 * next());
      const double width = w0 * (0.5 + next());
      const double centre = x0 + (2.0 * next() - 1.0) * 3.0 * w0;
      const double sgn = next() < 0.5 ? -1.0 : 1.0;
      for (int i = 0; i < g.n; ++i) {
        const double z = (g.x[i] - centre) / width;
        u.v[i] += sgn * amp * std::exp(-0.5 * z * z);
      }
    }
  } else {
    throw MkdvError("initial data: unknown shape '" + shape + "'");
  }
  return u;
}

std::vector<double> logspace(double a, double b, int m) {
  if (!(a > 0.0) || !(b > a) || m < 2) throw MkdvError("logspace needs 0 < a < b, m >= 2");
  std::vector<double> out(m);
  for (int i = 0; i < m; ++i)
    out[i] = a * std::pow(b / a, static_cast<double>(i) / (m - 1));
  out.back() = b;
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string dir = cfg.str("out", "out_" + cfg.experiment);
  std::filesystem::create_directories(dir);

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult res;
  res.output_dir = dir;
  double edge_mass = 0.0;
  bool incomplete = false;
  std::string error_msg;

  try {
    if (cfg.experiment == "decay") {
      res.report = run_decay(cfg, dir);
      edge_mass = res.report["metrics"]["edge_mass_max"].get<double>();
    } else if (cfg.experiment == "scattering") {
      res.report = run_scattering(cfg, dir, &edge_mass);
    } else if (cfg.experiment == "selfsimilar") {
      res.report = run_selfsimilar(cfg, dir, &edge_mass);
    } else if (cfg.experiment == "painleve") {
      res.report = run_painleve(cfg, dir);
    } else if (cfg.experiment == "soliton_stability") {
      res.report = run_soliton_stability(cfg, dir);
    } else if (cfg.experiment == "semigroup") {
      res.report = run_semigroup(cfg, dir);
    } else if (cfg.experiment == "oscint_check") {
      res.report = run_oscint_check(cfg, dir, &edge_mass);
    }
  } catch (const std::exception& e) {
    incomplete = true;
    error_msg = e.what();
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ordered_json manifest;
  manifest["schema"] = "mkdv-manifest/1";
  manifest["experiment"] = cfg.experiment;
  manifest["config"] = cfg.consumed();
  manifest["versions"] = {{"mkdv", "1.0.0"},
                          {"fftw", std::string(fftw_version)},
                          {"compiler", std::string(__VERSION__)},
                          {"isa", std::string(kernels::active_isa())}};
  manifest["edge_mass_max"] = edge_mass;
  manifest["incomplete"] = incomplete;
  if (incomplete) manifest["error"] = error_msg;
  // volatile fields: everything above is bit-stable for a fixed config+seed
  manifest["wall_time_s"] = wall;
  manifest["timestamp"] = iso_timestamp();
  save_json(dir + "/manifest.json", manifest);

  if (incomplete) throw MkdvError("experiment '" + cfg.experiment + "' failed: " + error_msg);

  save_json(dir + "/" + cfg.experiment + "_report.json", res.report);
  res.status = res.report["pass"].get<bool>() ? 0 : 1;
  return res;
}

}  // namespace mkdv
