#include "mkdv/modulation.hpp"

#include <cmath>
#include <sstream>

#include "mkdv/evolve.hpp"
#include "mkdv/fit.hpp"
#include "mkdv/soliton.hpp"
#include "mkdv/spectral.hpp"

namespace mkdv {

namespace {

// Pairings F_i = (u(.+X) - Q_c, zeta^i_c) and their derivatives in (X, c).
struct PairingState {
  double F1, F2;
  double J11, J12, J21, J22;  // rows: F1, F2; columns: d/dX, d/dc
  PhysicalField v;
};

PairingState eval_pairings(const SpectralField& uh, double c, double X, bool with_jacobian) {
  const GridPtr& g = uh.grid;
  PairingState st;
  // shift(F, s) evaluates u(y + s): s = +X recenters a soliton whose center
  // sits at X, so the fitted shift is the center position itself.
  SpectralField uyh = shift(uh, X);
  PhysicalField uy = inverse_transform(uyh);
  KernelPair k = build_kernel(c, g);
  PhysicalField Q = eval_Q({c, 0.0}, g);
  st.v = PhysicalField(g);
  for (int i = 0; i < g->n; ++i) st.v.v[i] = uy.v[i] - Q.v[i];
  st.F1 = inner_product(st.v, k.zeta1);
  st.F2 = inner_product(st.v, k.zeta2);
  if (!with_jacobian) return st;

  PhysicalField uyp = inverse_transform(differentiate(uyh, 1));  // u'(y + X)
  st.J11 = inner_product(uyp, k.zeta1);
  st.J21 = inner_product(uyp, k.zeta2);
  // d/dc lands on Q_c (exactly -xi2) and on zeta_c; the latter via a centered
  // difference of the kernel builder.
  const double hc = 1e-6 * std::max(1.0, c);
  KernelPair kp = build_kernel(c + hc, g), km = build_kernel(c - hc, g);
  PhysicalField dz1(g), dz2(g);
  for (int i = 0; i < g->n; ++i) {
    dz1.v[i] = (kp.zeta1.v[i] - km.zeta1.v[i]) / (2.0 * hc);
    dz2.v[i] = (kp.zeta2.v[i] - km.zeta2.v[i]) / (2.0 * hc);
  }
  st.J12 = -inner_product(k.xi2, k.zeta1) + inner_product(st.v, dz1);
  st.J22 = -inner_product(k.xi2, k.zeta2) + inner_product(st.v, dz2);
  return st;
}

}  // namespace

ModulationFit fit_modulation(const PhysicalField& u, double c_guess, double shift_guess,
                             double tol_factor, int max_iters) {
  if (!(c_guess > 0.0)) throw MkdvError("fit_modulation: c guess must be positive");
  const double tol = tol_factor * std::max(l2_norm(u), 1e-30);
  SpectralField uh = transform(u);
  double c = c_guess, X = shift_guess;
  double res = 0.0;
  for (int it = 0; it <= max_iters; ++it) {
    PairingState st = eval_pairings(uh, c, X, true);
    res = std::hypot(st.F1, st.F2);
    if (res <= tol) return {c, X, res, it};
    const double det = st.J11 * st.J22 - st.J12 * st.J21;
    const double scale = std::max({std::fabs(st.J11), std::fabs(st.J12), std::fabs(st.J21),
                                   std::fabs(st.J22), 1e-30});
    if (std::fabs(det) < 1e-12 * scale * scale)
      throw MkdvError("fit_modulation: singular constraint Jacobian");
    const double dX = (st.F1 * st.J22 - st.F2 * st.J12) / det;
    const double dc = (st.J11 * st.F2 - st.J21 * st.F1) / det;
    X -= dX;
    c -= dc;
    if (!(c > 0.0) || !std::isfinite(c) || !std::isfinite(X))
      throw MkdvError("fit_modulation: iteration left the soliton family (c <= 0)");
  }
  std::ostringstream msg;
  msg << "fit_modulation: no convergence in " << max_iters
      << " iterations, last residual = " << res;
  throw MkdvError(msg.str());
}

std::vector<double> ModulationTrack::centers() const {
  std::vector<double> X(times.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (k > 0) acc += 0.5 * (c[k] + c[k - 1]) * (times[k] - times[k - 1]);
    X[k] = acc - h[k];
  }
  return X;
}

std::vector<PhysicalField> evolve_v1(const PhysicalField& v0, const ModulationTrack& track,
                                     double dt, int sign) {
  if (track.times.empty()) throw MkdvError("evolve_v1: empty track");
  const std::vector<double> X = track.centers();
  std::vector<PhysicalField> out(track.times.size());

  const double t_end = track.times.back();
  if (t_end < dt) {  // degenerate single-snapshot track
    for (std::size_t k = 0; k < track.times.size(); ++k)
      out[k] = inverse_transform(shift(transform(v0), X[k]));
    return out;
  }

  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.sign = sign;
  cfg.snapshot_times = track.times;
  std::size_t next = 0;
  run_evolution(v0, cfg, [&](double t, const SpectralField& uh) {
    while (next < track.times.size() &&
           std::llround(track.times[next] / dt) == std::llround(t / dt)) {
      out[next] = inverse_transform(shift(uh, X[next]));
      ++next;
    }
  });
  if (next != track.times.size())
    throw MkdvError("evolve_v1: track times do not lie on the step grid");
  return out;
}

WeightSpec virial_weight(int k, double delta, double sigma, double x0, const Grid& g) {
  WeightSpec w = WeightSpec::virial(k, delta, sigma, x0);
  if (!virial_conditions_ok(w, g))
    throw MkdvError("virial_weight: (A_k, delta) fails the chi'-domination conditions");
  return w;
}

std::vector<double> virial_diagnostic(const std::vector<PhysicalField>& v1_frames,
                                      const WeightSpec& w, const std::vector<double>& times) {
  if (v1_frames.size() != times.size())
    throw MkdvError("virial_diagnostic: times/frames mismatch");
  std::vector<double> ledger(v1_frames.size());
  for (std::size_t k = 0; k < v1_frames.size(); ++k) {
    const PhysicalField& v = v1_frames[k];
    const Grid& g = *v.grid;
    const std::vector<double> chi = w.evaluate(g, times[k]);
    PhysicalField vy = differentiate(v, 1);
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) acc += chi[i] * (v.v[i] * v.v[i] + vy.v[i] * vy.v[i]);
    ledger[k] = acc * g.spacing;
  }
  return ledger;
}

namespace {

// H^1 norm of v against e^{ay}, restricted to |y| <= R: the full-box
// exponential weight spans hundreds of orders of magnitude on the long
// boxes used by the stability runs, so roundoff at the far right edge
// would otherwise dominate. The theorem's object is localized; the window
// keeps e^{2aR} * (roundoff)^2 far below the signal.
double windowed_exp_h1(const PhysicalField& v, double a, double R) {
  const Grid& g = *v.grid;
  PhysicalField vy = differentiate(v, 1);
  double acc = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double y = g.x[i];
    if (std::fabs(y) > R) continue;
    const double w2 = std::exp(2.0 * a * y);
    acc += w2 * (v.v[i] * v.v[i] + vy.v[i] * vy.v[i]);
  }
  return std::sqrt(acc * g.spacing);
}

std::pair<double, double> tail_exponent(const std::vector<double>& t,
                                        const std::vector<double>& val, double t_min) {
  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= t_min && t[i] > 0.0 && val[i] > 0.0) {
      ts.push_back(t[i]);
      vs.push_back(val[i]);
    }
  if (ts.size() < 3) return {0.0, 0.0};
  LinearFit f = loglog_fit(ts, vs);
  return {f.slope, f.r2};
}

}  // namespace

StabilityReport stability_experiment(double c0, const PhysicalField& v0, double T, double m,
                                     const StabilityParams& params) {
  if (!(c0 > 0.0)) throw MkdvError("stability: c0 must be positive");
  if (!(m > 0.5)) throw MkdvError("stability: weight exponent m must exceed 1/2");
  const GridPtr g = v0.grid;
  const double dt = params.dt;
  const double a = params.weight_a > 0.0 ? params.weight_a : 0.5 * std::sqrt(c0 / 3.0);

  StabilityReport rep;
  rep.c0 = c0;
  rep.m = m;
  rep.T = T;
  rep.dt = dt;
  rep.eps0 = l2_norm(v0);

  // Snapshot times on the step grid.
  const long n_end = std::llround(T / dt);
  std::vector<double> times;
  std::vector<long> snap_idx;
  for (int i = 0; i <= params.snapshots; ++i) {
    const long idx = std::llround(static_cast<double>(i) * n_end / params.snapshots);
    if (snap_idx.empty() || idx > snap_idx.back()) {
      snap_idx.push_back(idx);
      times.push_back(static_cast<double>(idx) * dt);
    }
  }

  PhysicalField u0 = eval_Q({c0, 0.0}, g);
  for (int i = 0; i < g->n; ++i) u0.v[i] += v0.v[i];

  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.t_end = times.back();
  cfg.snapshot_times = times;

  // Pass 1: evolve u, fit the modulation at each snapshot.
  std::vector<SpectralField> snaps;
  snaps.reserve(times.size());
  double c_prev = c0, X_prev = 0.0, t_prev = 0.0, cum = 0.0;
  run_evolution(u0, cfg, [&](double t, const SpectralField& uh) {
    const double X_guess = X_prev + c_prev * (t - t_prev);
    ModulationFit fit = fit_modulation(inverse_transform(uh), c_prev, X_guess);
    if (!rep.track.times.empty())
      cum += 0.5 * (fit.c + rep.track.c.back()) * (t - rep.track.times.back());
    rep.track.times.push_back(t);
    rep.track.c.push_back(fit.c);
    rep.track.h.push_back(cum - fit.shift);
    rep.track.constraint_residuals.push_back(fit.residual);
    rep.track.newton_iters.push_back(fit.iters);
    snaps.push_back(uh);
    c_prev = fit.c;
    X_prev = fit.shift;
    t_prev = t;
  });

  // Pass 2: free flow v1, then v = u_y - Q_c and v2 = v - v1.
  const std::vector<PhysicalField> v1 = evolve_v1(v0, rep.track, dt);
  const std::vector<double> X = rep.track.centers();
  const WeightSpec w_half = WeightSpec::tanh_half(params.delta_w);
  const WeightSpec w_poly = WeightSpec::poly_plus(m);
  const double R = std::min(params.exp_window / a, 0.45 * g->length);

  auto& N = rep.norms;
  for (std::size_t k = 0; k < times.size(); ++k) {
    PhysicalField uy = inverse_transform(shift(snaps[k], X[k]));
    PhysicalField Q = eval_Q({rep.track.c[k], 0.0}, g);
    PhysicalField v(g), v2(g);
    for (int i = 0; i < g->n; ++i) {
      v.v[i] = uy.v[i] - Q.v[i];
      v2.v[i] = v.v[i] - v1[k].v[i];
    }
    N["v_h1w"].push_back(weighted_norm(v, w_half, 1));
    N["v1_h1w"].push_back(weighted_norm(v1[k], w_half, 1));
    N["v1_poly_m_h1"].push_back(weighted_norm(v1[k], w_poly, 1));
    N["v2_exp_a_h1"].push_back(windowed_exp_h1(v2, a, R));
    N["v_l2"].push_back(l2_norm(v));
  }

  for (const auto& [name, series] : N)
    rep.fitted_exponents[name] = tail_exponent(times, series, T / 2);

  // Scaled modulation rates by centered differences on the track.
  const auto& tt = rep.track.times;
  rep.cdot_scaled.assign(tt.size(), 0.0);
  rep.hdot_scaled.assign(tt.size(), 0.0);
  for (std::size_t k = 1; k + 1 < tt.size(); ++k) {
    const double dtk = tt[k + 1] - tt[k - 1];
    const double sc = std::pow(1.0 + tt[k] * tt[k], m);  // <t>^{2m}
    rep.cdot_scaled[k] = sc * std::fabs((rep.track.c[k + 1] - rep.track.c[k - 1]) / dtk);
    rep.hdot_scaled[k] = sc * std::fabs((rep.track.h[k + 1] - rep.track.h[k - 1]) / dtk);
  }

  // Terminal parameters: mean over the last tenth of the run.
  double sc_ = 0.0, sh_ = 0.0;
  int cnt = 0;
  for (std::size_t k = 0; k < tt.size(); ++k)
    if (tt[k] >= 0.9 * tt.back()) {
      sc_ += rep.track.c[k];
      sh_ += rep.track.h[k];
      ++cnt;
    }
  rep.c_plus = cnt ? sc_ / cnt : c0;
  rep.h_plus = cnt ? sh_ / cnt : 0.0;

  const WeightSpec w_vir = virial_weight(0, params.delta_w, 0.0, 0.0, *g);
  rep.virial_ledger = virial_diagnostic(v1, w_vir, times);
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < rep.virial_ledger.size(); ++k)
    worst = std::max(worst, rep.virial_ledger[k + 1] - rep.virial_ledger[k]);
  rep.virial_max_increase =
      rep.virial_ledger.empty() || rep.virial_ledger[0] <= 0.0 ? 0.0 : worst / rep.virial_ledger[0];
  return rep;
}

}  // namespace mkdv
