#include <cmath>

#include "doctest.h"
#include "mkdv/modulation.hpp"
#include "mkdv/soliton.hpp"
#include "mkdv/spectral.hpp"

using namespace mkdv;

namespace {

PhysicalField bump(const GridPtr& g, double amp, double w, double x0) {
  PhysicalField u(g);
  for (int i = 0; i < g->n; ++i) {
    const double z = (g->x[i] - x0) / w;
    u.v[i] = amp * std::exp(-0.5 * z * z);
  }
  return u;
}

}  // namespace

TEST_CASE("weight families evaluate their closed forms") {
  CHECK(WeightSpec::tanh_half(0.5).evaluate_at(0.8) ==
        doctest::Approx(std::sqrt(1.0 + std::tanh(0.4))).epsilon(1e-14));
  CHECK(WeightSpec::exponential(0.3).evaluate_at(-2.0) ==
        doctest::Approx(std::exp(-0.6)).epsilon(1e-14));
  CHECK(WeightSpec::poly_plus(1.6).evaluate_at(-5.0) == doctest::Approx(1.0));
  CHECK(WeightSpec::poly_plus(1.6).evaluate_at(3.0) ==
        doctest::Approx(std::pow(1.0 + 9.0, 0.8)).epsilon(1e-14));
  // drifting virial window: evaluated at y + sigma t + x0
  const WeightSpec w = WeightSpec::virial(0, 0.25, 0.5, 1.0);
  CHECK(w.evaluate_at(2.0, 4.0) ==
        doctest::Approx(1.0 + std::tanh(0.25 * (2.0 + 2.0 + 1.0))).epsilon(1e-14));
}

TEST_CASE("virial weight factory enforces the commutator conditions") {
  const GridPtr g = make_grid(1024, 200.0);
  const WeightSpec ok = virial_weight(0, 0.1, 0.0, 0.0, *g);
  CHECK(virial_conditions_ok(ok, *g));
  // the auto-selected A_k = max(1, k^2) keeps polynomial windows monotone
  CHECK(virial_conditions_ok(virial_weight(2, 0.5, 0.0, 0.0, *g), *g));
  // an undersized A_k (<= k^2/4) makes chi non-monotone and must be rejected
  CHECK_FALSE(virial_conditions_ok(WeightSpec::virial(2, 1.0, 0.0, 0.0, 0.05), *g));
  CHECK_FALSE(virial_conditions_ok(WeightSpec::virial(2, 1.0, 0.0, 0.0, 1.0), *g));
}

TEST_CASE("modulation fit recovers planted parameters to Newton accuracy") {
  const GridPtr g = make_grid(2048, 200.0);
  const PhysicalField u = eval_Q({1.3, 2.37}, g);
  const ModulationFit fit = fit_modulation(u, 1.0, 2.0);
  CHECK(std::fabs(fit.c - 1.3) <= 1e-10);
  CHECK(std::fabs(fit.shift - 2.37) <= 1e-10);
  CHECK(fit.iters <= 15);

  // orthogonality at the fitted point
  const KernelPair k = build_kernel(fit.c, g);
  PhysicalField v(g);
  const PhysicalField Qf = eval_Q({fit.c, fit.shift}, g);
  for (int i = 0; i < g->n; ++i) v.v[i] = u.v[i] - Qf.v[i];
  const SpectralField vs = shift(transform(v), fit.shift);  // recentre
  const PhysicalField vy = inverse_transform(vs);
  CHECK(std::fabs(inner_product(vy, k.zeta1)) <= 1e-9);
  CHECK(std::fabs(inner_product(vy, k.zeta2)) <= 1e-9);
}

TEST_CASE("modulation fit absorbs a small perturbation and stays in the tube") {
  const GridPtr g = make_grid(2048, 200.0);
  PhysicalField u = eval_Q({1.0, 0.0}, g);
  const PhysicalField p = bump(g, 0.02, 1.5, 1.0);
  for (int i = 0; i < g->n; ++i) u.v[i] += p.v[i];
  const ModulationFit fit = fit_modulation(u, 1.0, 0.0);
  CHECK(std::fabs(fit.c - 1.0) <= 0.05);
  CHECK(std::fabs(fit.shift) <= 0.05);
  CHECK(fit.residual <= 1e-10 * l2_norm(u));

  // far from the family the Newton solve must refuse rather than wander
  const PhysicalField junk = bump(g, 0.05, 3.0, 0.0);
  CHECK_THROWS_AS((void)fit_modulation(junk, 1.0, 0.0), MkdvError);
}

TEST_CASE("stability pipeline: constraints, norms, ledger, and settling") {
  const GridPtr g = make_grid(1024, 200.0);
  const PhysicalField v0 = bump(g, 0.01, 1.5, -1.0);
  StabilityParams params;
  params.dt = 2e-3;
  params.snapshots = 20;
  const StabilityReport rep = stability_experiment(1.0, v0, 10.0, 1.0, params);

  const std::size_t n = rep.track.times.size();
  REQUIRE(n >= 20u);
  CHECK(rep.c0 == 1.0);
  CHECK(rep.eps0 > 0.0);
  for (double r : rep.track.constraint_residuals) CHECK(r <= 1e-9);
  for (double c : rep.track.c) CHECK(std::fabs(c - 1.0) <= 0.05);

  for (const char* key : {"v_l2", "v_h1w", "v1_h1w", "v1_poly_m_h1", "v2_exp_a_h1"}) {
    REQUIRE(rep.norms.count(key) == 1u);
    REQUIRE(rep.norms.at(key).size() == n);
    for (double x : rep.norms.at(key)) {
      CHECK(std::isfinite(x));
      CHECK(x >= 0.0);
    }
    CHECK(rep.fitted_exponents.count(key) == 1u);
  }
  REQUIRE(rep.virial_ledger.size() == n);
  CHECK(rep.virial_max_increase >= 0.0);
  REQUIRE(rep.cdot_scaled.size() == n);
  CHECK(std::fabs(rep.c_plus - 1.0) <= 0.05);

  // the perturbation's mass cannot grow: v-norm stays of the order of eps0
  CHECK(rep.norms.at("v_l2").back() <= 10.0 * rep.norms.at("v_l2").front());
}

TEST_CASE("evolve_v1 aligns with the track and conserves its mass") {
  const GridPtr g = make_grid(1024, 200.0);
  const PhysicalField v0 = bump(g, 0.01, 1.5, 0.0);
  ModulationTrack track;
  for (int m = 0; m <= 10; ++m) {
    track.times.push_back(0.1 * m);
    track.c.push_back(1.0);
    track.h.push_back(0.0);
    track.constraint_residuals.push_back(0.0);
    track.newton_iters.push_back(0);
  }
  const std::vector<PhysicalField> frames = evolve_v1(v0, track, 1e-3);
  REQUIRE(frames.size() == track.times.size());
  const double m0 = l2_norm(frames.front());
  const double mT = l2_norm(frames.back());
  CHECK(m0 == doctest::Approx(l2_norm(v0)).epsilon(1e-12));
  CHECK(mT == doctest::Approx(m0).epsilon(1e-9));  // free mKdV conserves mass
}
