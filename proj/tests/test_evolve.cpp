#include <cmath>

#include "doctest.h"
#include "mkdv/evolve.hpp"
#include "mkdv/soliton.hpp"
#include "mkdv/spectral.hpp"

using namespace mkdv;

namespace {

PhysicalField gaussian(const GridPtr& g, double amp, double w) {
  PhysicalField u(g);
  for (int i = 0; i < g->n; ++i) u.v[i] = amp * std::exp(-0.5 * (g->x[i] / w) * (g->x[i] / w));
  return u;
}

double rel_l2(const PhysicalField& a, const PhysicalField& b) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    num += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
    den += b.v[i] * b.v[i];
  }
  return std::sqrt(num / den);
}

PhysicalField run_to(const PhysicalField& u0, EvolveConfig cfg) {
  Stepper st(transform(u0), cfg);
  st.advance(static_cast<long>(std::llround(cfg.t_end / cfg.dt)));
  return st.u();
}

}  // namespace

TEST_CASE("pure dispersive flow is the exact Airy multiplier for both schemes") {
  const GridPtr g = make_grid(256, 60.0);
  const PhysicalField u0 = gaussian(g, 1.0, 1.5);
  const SpectralField U0 = transform(u0);
  for (Scheme s : {Scheme::etdrk4, Scheme::if_rk4}) {
    EvolveConfig cfg;
    cfg.scheme = s;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    cfg.nonlinearity = Nonlinearity::none;
    Stepper st(U0, cfg);
    st.advance(100);
    double sup = 0.0;
    for (int j = 0; j < g->n; ++j) {
      const double k = g->k[j];
      const cplx expect = std::exp(cplx(0.0, k * k * k * st.t())) * U0.c[j];
      sup = std::max(sup, std::abs(st.uhat().c[j] - expect));
    }
    CHECK(sup <= 1e-11);
  }
}

TEST_CASE("soliton translates at speed c") {
  const GridPtr g = make_grid(1024, 100.0);
  const double c = 1.0, T = 2.0;
  const PhysicalField u0 = eval_Q({c, 0.0}, g);
  const PhysicalField expect = eval_Q({c, c * T}, g);

  for (Scheme s : {Scheme::etdrk4, Scheme::if_rk4}) {
    EvolveConfig cfg;
    cfg.scheme = s;
    cfg.dt = 2e-3;
    cfg.t_end = T;
    CHECK(rel_l2(run_to(u0, cfg), expect) <= 1e-7);
  }
}

TEST_CASE("co-moving frame freezes the soliton") {
  const GridPtr g = make_grid(1024, 100.0);
  const double c = 1.0;
  const PhysicalField u0 = eval_Q({c, 0.0}, g);
  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 2.0;
  cfg.frame_speed = c;
  CHECK(rel_l2(run_to(u0, cfg), u0) <= 1e-7);
}

TEST_CASE("mass and energy drift stay at integrator roundoff") {
  const GridPtr g = make_grid(512, 100.0);
  const PhysicalField u0 = gaussian(g, 0.5, 2.0);
  const Conserved base = conserved_quantities(u0);
  EvolveConfig cfg;
  cfg.dt = 2e-3;
  cfg.t_end = 5.0;
  const PhysicalField u = run_to(u0, cfg);
  const Conserved end = conserved_quantities(u);
  CHECK(std::fabs(end.mass - base.mass) / base.mass <= 1e-9);
  CHECK(std::fabs(end.energy - base.energy) / std::fabs(base.energy) <= 1e-7);
  CHECK(std::fabs(end.momentum - base.momentum) / std::fabs(base.momentum) <= 1e-9);
}

TEST_CASE("fourth-order convergence in dt") {
  const GridPtr g = make_grid(512, 100.0);
  const PhysicalField u0 = eval_Q({1.0, 0.0}, g);
  auto err_at = [&](Scheme s, double dt) {
    EvolveConfig ref;
    ref.scheme = s;
    ref.dt = 1e-4;
    ref.t_end = 1.0;
    const PhysicalField uref = run_to(u0, ref);
    EvolveConfig cfg;
    cfg.scheme = s;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    return rel_l2(run_to(u0, cfg), uref);
  };
  for (Scheme s : {Scheme::etdrk4, Scheme::if_rk4}) {
    const double ratio = err_at(s, 4e-3) / err_at(s, 2e-3);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
  }
}

TEST_CASE("weighted linear flow is dissipative") {
  // z = e^{ay} v with Re(symbol) = -a(c + 3k^2 - a^2) < 0 for a < sqrt(c)
  const GridPtr g = make_grid(512, 100.0);
  const PhysicalField z0 = gaussian(g, 1.0, 2.0);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.nonlinearity = Nonlinearity::none;
  cfg.frame_speed = 1.0;
  cfg.weight_a = 0.5;
  const PhysicalField z = run_to(z0, cfg);
  CHECK(l2_norm(z) < 0.75 * l2_norm(z0));
}

TEST_CASE("run_evolution delivers t=0, snapshots on the step grid, and t_end") {
  const GridPtr g = make_grid(256, 60.0);
  const PhysicalField u0 = gaussian(g, 0.3, 1.5);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.snapshot_times = {0.1234, 0.25};
  std::vector<double> seen;
  run_evolution(u0, cfg, [&](double t, const SpectralField& uh) {
    REQUIRE(uh.n() == g->n);
    seen.push_back(t);
  });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == 0.0);
  CHECK(seen[1] == doctest::Approx(0.123).epsilon(1e-9));  // rounded to step grid
  CHECK(seen[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(seen[3] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("scaling action matches its definition and integrates back") {
  const GridPtr g = make_grid(512, 80.0);
  RunState state;
  state.t = 0.7;
  state.u = gaussian(g, 0.8, 1.2);
  const auto [Su, ISu] = scaling_action(state, +1, 1.0);

  const PhysicalField ux = differentiate(state.u, 1);
  const PhysicalField uxxx = differentiate(state.u, 3);
  PhysicalField cube(g);
  for (int i = 0; i < g->n; ++i) cube.v[i] = state.u.v[i] * state.u.v[i] * state.u.v[i];
  const PhysicalField cube_x = differentiate(cube, 1);
  double sup = 0.0;
  for (int i = 0; i < g->n; ++i) {
    const double expect =
        state.u.v[i] + g->x[i] * ux.v[i] - 3.0 * state.t * (uxxx.v[i] + cube_x.v[i]);
    sup = std::max(sup, std::fabs(Su.v[i] - expect));
  }
  CHECK(sup <= 1e-10);

  const PhysicalField dISu = differentiate(ISu, 1);
  double sup2 = 0.0;
  for (int i = 0; i < g->n; ++i) sup2 = std::max(sup2, std::fabs(dISu.v[i] - Su.v[i]));
  CHECK(sup2 <= 1e-8);
}

TEST_CASE("config validation rejects bad combinations") {
  EvolveConfig cfg;
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(), MkdvError);
  cfg = {};
  cfg.weight_a = 0.3;  // exponential weight only for linear flows
  CHECK_THROWS_AS(cfg.validate(), MkdvError);
  cfg = {};
  cfg.snapshot_times = {0.5, 0.25};
  cfg.t_end = 1.0;
  CHECK_THROWS_AS(cfg.validate(), MkdvError);
}

TEST_CASE("divergence trips the blow-up guard") {
  const GridPtr g = make_grid(256, 20.0);
  PhysicalField u0(g);
  for (int i = 0; i < g->n; ++i) u0.v[i] = 2.0 / std::cosh(g->x[i]);
  EvolveConfig cfg;
  cfg.scheme = Scheme::if_rk4;
  cfg.dt = 0.2;  // grossly violates the nonlinear stability limit
  cfg.t_end = 20.0;
  Stepper st(transform(u0), cfg);
  CHECK_THROWS_AS(st.advance(100), BlowUpError);
}
