#include "mkdv/soliton.hpp"

#include <cmath>

#include "mkdv/evolve.hpp"
#include "mkdv/fit.hpp"
#include "mkdv/spectral.hpp"

namespace mkdv {

namespace {

void check_edge_decay(double c, double shift, const Grid& g) {
  const double rc = std::sqrt(c);
  const double e0 = 1.0 / std::cosh(rc * (g.x[0] - shift));
  const double e1 = 1.0 / std::cosh(rc * (g.x[g.n - 1] - shift));
  if (std::max(e0, e1) > 1e-10)
    throw MkdvError("soliton: profile does not decay at the domain edge (domain too small)");
}

void check_params(const SolitonParams& p) {
  if (!(p.c > 0.0) || !std::isfinite(p.c) || !std::isfinite(p.shift))
    throw MkdvError("soliton: c must be positive and finite");
}

}  // namespace

PhysicalField eval_Q(const SolitonParams& p, const GridPtr& grid) {
  check_params(p);
  check_edge_decay(p.c, p.shift, *grid);
  const double rc = std::sqrt(p.c), amp = std::sqrt(2.0 * p.c);
  PhysicalField out(grid);
  for (int i = 0; i < grid->n; ++i) out.v[i] = amp / std::cosh(rc * (grid->x[i] - p.shift));
  return out;
}

PhysicalField eval_dQ_dy(const SolitonParams& p, const GridPtr& grid) {
  check_params(p);
  check_edge_decay(p.c, p.shift, *grid);
  const double rc = std::sqrt(p.c);
  PhysicalField out(grid);
  for (int i = 0; i < grid->n; ++i) {
    const double s = rc * (grid->x[i] - p.shift);
    const double sech = 1.0 / std::cosh(s);
    out.v[i] = -std::sqrt(2.0) * p.c * sech * std::tanh(s);
  }
  return out;
}

PhysicalField eval_dQ_dc(const SolitonParams& p, const GridPtr& grid) {
  check_params(p);
  check_edge_decay(p.c, p.shift, *grid);
  const double rc = std::sqrt(p.c), amp = std::sqrt(2.0 * p.c);
  PhysicalField out(grid);
  for (int i = 0; i < grid->n; ++i) {
    const double y = grid->x[i] - p.shift;
    const double s = rc * y;
    const double sech = 1.0 / std::cosh(s);
    const double Q = amp * sech;
    const double dQdy = -std::sqrt(2.0) * p.c * sech * std::tanh(s);
    out.v[i] = (Q + y * dQdy) / (2.0 * p.c);
  }
  return out;
}

PhysicalField apply_Lc(const PhysicalField& v, double c) {
  PhysicalField Q = eval_Q({c, 0.0}, v.grid);
  PhysicalField w(v.grid);
  PhysicalField vyy = differentiate(v, 2);
  for (int i = 0; i < v.n(); ++i)
    w.v[i] = -c * v.v[i] + vyy.v[i] + 3.0 * Q.v[i] * Q.v[i] * v.v[i];
  return differentiate(w, 1);
}

double miracle_check(double c, const GridPtr& grid) {
  PhysicalField lhs = eval_dQ_dc({c, 0.0}, grid);
  PhysicalField yQ = eval_Q({c, 0.0}, grid);
  for (int i = 0; i < grid->n; ++i) yQ.v[i] *= grid->x[i];
  PhysicalField rhs = differentiate(yQ, 1);
  double sup = 0.0;
  for (int i = 0; i < grid->n; ++i)
    sup = std::max(sup, std::fabs(lhs.v[i] - rhs.v[i] / (2.0 * c)));
  return sup;
}

KernelPair build_kernel(double c, const GridPtr& grid) {
  KernelPair k;
  k.xi1 = eval_dQ_dy({c, 0.0}, grid);
  k.xi2 = eval_dQ_dc({c, 0.0}, grid);
  PhysicalField Q = eval_Q({c, 0.0}, grid);

  // int_{-inf}^y dQ/dc: the integrand has zero total integral, so the
  // spectral primitive applies; re-base it to vanish at the left edge.
  PhysicalField prim = antiderivative(k.xi2);
  const double left = prim.v[0];
  for (int i = 0; i < grid->n; ++i) prim.v[i] -= left;

  // (xi1, zeta1) = 1 and (xi2, zeta1) = 0 with zeta1 = -alpha1*prim + alpha2*Q:
  //   -q*alpha1 + r*alpha2 = 1,  -p*alpha1 + g*alpha2 = 0.
  const double q = inner_product(k.xi1, prim), r = inner_product(k.xi1, Q);
  const double p = inner_product(k.xi2, prim), g = inner_product(k.xi2, Q);
  const double det = -q * g + r * p;
  if (std::fabs(det) < 1e-12)
    throw MkdvError("soliton: singular biorthogonality system");
  k.alpha1 = g / det;
  k.alpha2 = p / det;

  k.zeta1 = PhysicalField(grid);
  k.zeta2 = PhysicalField(grid);
  for (int i = 0; i < grid->n; ++i) {
    k.zeta1.v[i] = -k.alpha1 * prim.v[i] + k.alpha2 * Q.v[i];
    k.zeta2.v[i] = k.alpha1 * Q.v[i];
  }
  return k;
}

std::pair<PhysicalField, PhysicalField> project(const PhysicalField& v, const KernelPair& k) {
  require_same_grid(v.grid, k.xi1.grid, "projection kernel");
  const double a1 = inner_product(v, k.zeta1);
  const double a2 = inner_product(v, k.zeta2);
  PhysicalField Pv(v.grid), Qv(v.grid);
  for (int i = 0; i < v.n(); ++i) {
    Pv.v[i] = a1 * k.xi1.v[i] + a2 * k.xi2.v[i];
    Qv.v[i] = v.v[i] - Pv.v[i];
  }
  return {std::move(Pv), std::move(Qv)};
}

DecayReport semigroup_decay_experiment(double c, double a, const PhysicalField& v0, double T,
                                       double dt) {
  if (!(c > 0.0)) throw MkdvError("semigroup: c must be positive");
  if (!(a > 0.0) || !(a < std::sqrt(c / 3.0)))
    throw MkdvError("semigroup: weight must satisfy 0 < a < sqrt(c/3)");
  const GridPtr grid = v0.grid;
  KernelPair k = build_kernel(c, grid);
  PhysicalField Qv0 = project(v0, k).second;

  EvolveConfig cfg;
  cfg.dt = dt;
  cfg.t_end = T;
  cfg.weight_a = a;
  cfg.nonlinearity = Nonlinearity::linear_potential;  // set again by evolve_linearized
  const int nsnap = 40;
  for (int i = 1; i < nsnap; ++i) cfg.snapshot_times.push_back(T * i / nsnap);

  // Weighted copies of the kernel pair: pairings and norms of the conjugated
  // variable z = e^{ay} v need e^{-ay} zeta (pairing) and e^{ay} xi (P v).
  PhysicalField z1(grid), z2(grid), w1(grid), w2(grid);
  for (int i = 0; i < grid->n; ++i) {
    const double em = std::exp(-a * grid->x[i]), ep = std::exp(a * grid->x[i]);
    z1.v[i] = em * k.zeta1.v[i];
    z2.v[i] = em * k.zeta2.v[i];
    w1.v[i] = ep * k.xi1.v[i];
    w2.v[i] = ep * k.xi2.v[i];
  }

  DecayReport rep;
  rep.c = c;
  rep.a = a;
  std::vector<RunState> states = evolve_linearized(Qv0, c, cfg);
  PhysicalField Pw(grid);
  for (const RunState& st : states) {
    const double nz = l2_norm(st.u);
    const double a1 = inner_product(st.u, z1), a2 = inner_product(st.u, z2);
    for (int i = 0; i < grid->n; ++i) Pw.v[i] = a1 * w1.v[i] + a2 * w2.v[i];
    const double leak = nz > 0.0 ? l2_norm(Pw) / nz : 0.0;
    if (leak > 0.10)
      throw MkdvError("semigroup: kernel leakage above 10% of the norm invalidates the fit");
    rep.times.push_back(st.t);
    rep.weighted_norms.push_back(nz);
    rep.leakage.push_back(leak);
  }

  std::vector<double> ts, ln;
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    if (rep.times[i] >= T / 2 && rep.weighted_norms[i] > 0.0) {
      ts.push_back(rep.times[i]);
      ln.push_back(std::log(rep.weighted_norms[i]));
    }
  if (ts.size() >= 3) {
    LinearFit f = linear_fit(ts, ln);
    rep.fitted_b = -f.slope;
    rep.fit_r2 = f.r2;
  }
  return rep;
}

}  // namespace mkdv
