#include "mkdv/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mkdv/fft.hpp"
#include "mkdv/kernels.hpp"
#include "mkdv/spectral.hpp"

namespace mkdv {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;
inline double alt_sign(int j) { return (j & 1) ? -1.0 : 1.0; }
}  // namespace

void EvolveConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw MkdvError("evolve: dt must be positive");
  if (!(t_end >= dt) || !std::isfinite(t_end))
    throw MkdvError("evolve: t_end must be >= dt");
  if (sign != 1 && sign != -1) throw MkdvError("evolve: sign must be +1 or -1");
  if (!(blowup_factor > 1.0)) throw MkdvError("evolve: blowup_factor must exceed 1");
  if (!std::isfinite(frame_speed) || !std::isfinite(weight_a))
    throw MkdvError("evolve: non-finite frame_speed/weight_a");
  if (weight_a != 0.0 && nonlinearity == Nonlinearity::cubic)
    throw MkdvError("evolve: exponential weight is only supported for linear flows");
  double prev = 0.0;
  for (double s : snapshot_times) {
    if (!(s >= 0.0) || s > t_end * (1.0 + 1e-12))
      throw MkdvError("evolve: snapshot time outside [0, t_end]");
    if (s < prev) throw MkdvError("evolve: snapshot times must be sorted");
    prev = s;
  }
}

Conserved conserved_quantities(const PhysicalField& u) {
  const auto& K = kernels::active();
  const Grid& g = *u.grid;
  const std::size_t n = static_cast<std::size_t>(g.n);
  Conserved out;
  out.mass = g.spacing * K.dot(u.v.data(), u.v.data(), n);
  out.momentum = g.spacing * K.sum(u.v.data(), n);
  PhysicalField ux = differentiate(u, 1);
  std::vector<double> u2(n);
  K.vmul_rr(u2.data(), u.v.data(), u.v.data(), n);
  out.energy = 0.5 * g.spacing * K.dot(ux.v.data(), ux.v.data(), n) -
               0.25 * g.spacing * K.dot(u2.data(), u2.data(), n);
  return out;
}

Stepper::Stepper(const SpectralField& u0, const EvolveConfig& cfg) : Stepper(u0, cfg, PhysicalField()) {}

Stepper::Stepper(const SpectralField& u0, const EvolveConfig& cfg, const PhysicalField& potential)
    : grid_(u0.grid), cfg_(cfg), uhat_(u0) {
  cfg_.validate();
  if (cfg_.nonlinearity == Nonlinearity::linear_potential) {
    if (!potential.grid) throw MkdvError("evolve: linear_potential needs a potential field");
    require_same_grid(u0.grid, potential.grid, "stepper potential");
    potential_ = potential.v;
  }
  const std::size_t n = static_cast<std::size_t>(grid_->n);
  Nu_.resize(n); Na_.resize(n); Nb_.resize(n); Nc_.resize(n);
  sa_.resize(n); sb_.resize(n); sc_.resize(n); ctmp_.resize(n); cwork_.resize(n);
  p1_.resize(n); p2_.resize(n);
  prepare_coefficients();
  to_phys(uhat_.c, p1_);
  u0_maxabs_ = kernels::active().max_abs(p1_.data(), n);
}

double Stepper::t() const { return static_cast<double>(steps_) * cfg_.dt; }

PhysicalField Stepper::u() const { return inverse_transform(uhat_); }

void Stepper::prepare_coefficients() {
  const int n = grid_->n;
  const double h = cfg_.dt;
  const double a = cfg_.weight_a;
  E_.resize(n); E2_.resize(n); mult_.resize(n);
  const bool etd = cfg_.scheme == Scheme::etdrk4;
  if (etd) { Q_.resize(n); f1_.resize(n); f2d_.resize(n); f3_.resize(n); }

  std::vector<double> mask = dealias_mask(*grid_);
  if (!cfg_.dealias)
    for (int j = 0; j < n; ++j) mask[j] = (j == n / 2) ? 0.0 : 1.0;

  const int M = 32;  // contour points, half-offset so none hits a real root
  std::vector<cplx> ring(M);
  for (int m = 0; m < M; ++m) {
    const double th = 2.0 * M_PI * (m + 0.5) / M;
    ring[m] = cplx(std::cos(th), std::sin(th));
  }

  for (int j = 0; j < n; ++j) {
    // Nyquist carries no odd-derivative phase; only the weight damping acts.
    const cplx D = (j == n / 2) ? cplx(-a, 0.0) : cplx(-a, grid_->k[j]);
    const cplx L = cfg_.frame_speed * D - D * D * D;
    const cplx z = h * L;
    E_[j] = std::exp(z);
    E2_[j] = std::exp(0.5 * z);
    const double nl = (cfg_.nonlinearity == Nonlinearity::linear_potential) ? 3.0 : double(cfg_.sign);
    mult_[j] = -nl * D * mask[j];
    if (!etd) continue;
    cplx q(0), g1(0), g2(0), g3(0);
    for (int m = 0; m < M; ++m) {
      const cplx s = z + ring[m];
      const cplx es = std::exp(s), es2 = std::exp(0.5 * s);
      const cplx s3 = s * s * s;
      q += (es2 - 1.0) / s;
      g1 += (-4.0 - s + es * (4.0 - 3.0 * s + s * s)) / s3;
      g2 += (2.0 + s + es * (-2.0 + s)) / s3;
      g3 += (-4.0 - 3.0 * s - s * s + es * (4.0 - s)) / s3;
    }
    const double w = h / M;
    Q_[j] = w * q;
    f1_[j] = w * g1;
    f2d_[j] = 2.0 * w * g2;
    f3_[j] = w * g3;
  }
}

void Stepper::to_phys(const std::vector<cplx>& c, std::vector<double>& u) {
  const int n = grid_->n;
  for (int j = 0; j < n; ++j) ctmp_[j] = c[j] * alt_sign(j);
  fft::backward(ctmp_.data(), cwork_.data(), static_cast<std::size_t>(n));
  const double scale = grid_->dk() / kSqrt2Pi;
  for (int i = 0; i < n; ++i) u[i] = cwork_[i].real() * scale;
}

void Stepper::to_spec(const std::vector<double>& u, std::vector<cplx>& c) {
  const int n = grid_->n;
  for (int i = 0; i < n; ++i) ctmp_[i] = cplx(u[i], 0.0);
  fft::forward(ctmp_.data(), cwork_.data(), static_cast<std::size_t>(n));
  const double scale = grid_->spacing / kSqrt2Pi;
  for (int j = 0; j < n; ++j) c[j] = cwork_[j] * (scale * alt_sign(j));
}

void Stepper::eval_nonlinear(const std::vector<cplx>& in, double t_stage, bool check_blowup,
                             std::vector<cplx>& out) {
  const std::size_t n = static_cast<std::size_t>(grid_->n);
  if (cfg_.nonlinearity == Nonlinearity::none) {
    std::fill(out.begin(), out.end(), cplx(0.0, 0.0));
    return;
  }
  const auto& K = kernels::active();
  to_phys(in, p1_);
  if (check_blowup) {
    const double m = K.max_abs(p1_.data(), n);
    if (!std::isfinite(m) || (u0_maxabs_ > 0.0 && m > cfg_.blowup_factor * u0_maxabs_))
      throw BlowUpError("evolve: solution exceeded the blow-up guard at t = " + std::to_string(t()),
                        t());
  }
  if (cfg_.nonlinearity == Nonlinearity::cubic)
    K.vcube(p2_.data(), p1_.data(), n);
  else
    K.vmul_rr(p2_.data(), p1_.data(), potential_.data(), n);
  to_spec(p2_, out);
  K.vmul_cc(out.data(), mult_.data(), out.data(), n);
  if (cfg_.nonlinearity == Nonlinearity::cubic && cfg_.a_of_t) {
    const double av = cfg_.a_of_t(t_stage);
    if (!std::isfinite(av) || std::fabs(av) > 1.0 + 1e-12)
      throw MkdvError("evolve: a(t) must satisfy |a(t)| <= 1");
    for (std::size_t j = 0; j < n; ++j) out[j] *= av;
  }
}

void Stepper::step_etdrk4() {
  const auto& K = kernels::active();
  const std::size_t n = static_cast<std::size_t>(grid_->n);
  const double tn = t(), h = cfg_.dt;
  eval_nonlinear(uhat_.c, tn, true, Nu_);
  K.vfma2_cc(sa_.data(), E2_.data(), uhat_.c.data(), Q_.data(), Nu_.data(), n);
  eval_nonlinear(sa_, tn + 0.5 * h, false, Na_);
  K.vfma2_cc(sb_.data(), E2_.data(), uhat_.c.data(), Q_.data(), Na_.data(), n);
  eval_nonlinear(sb_, tn + 0.5 * h, false, Nb_);
  for (std::size_t j = 0; j < n; ++j) ctmp_[j] = 2.0 * Nb_[j] - Nu_[j];
  K.vfma2_cc(sc_.data(), E2_.data(), sa_.data(), Q_.data(), ctmp_.data(), n);
  eval_nonlinear(sc_, tn + h, false, Nc_);
  for (std::size_t j = 0; j < n; ++j) ctmp_[j] = Na_[j] + Nb_[j];
  K.vfma4_cc(uhat_.c.data(), E_.data(), uhat_.c.data(), f1_.data(), Nu_.data(), f2d_.data(),
             ctmp_.data(), f3_.data(), Nc_.data(), n);
}

void Stepper::step_if_rk4() {
  const auto& K = kernels::active();
  const std::size_t n = static_cast<std::size_t>(grid_->n);
  const double tn = t(), h = cfg_.dt;
  eval_nonlinear(uhat_.c, tn, true, Nu_);  // k1
  for (std::size_t j = 0; j < n; ++j) ctmp_[j] = uhat_.c[j] + 0.5 * h * Nu_[j];
  K.vmul_cc(sa_.data(), E2_.data(), ctmp_.data(), n);
  eval_nonlinear(sa_, tn + 0.5 * h, false, Na_);  // k2
  K.vmul_cc(sb_.data(), E2_.data(), uhat_.c.data(), n);  // E2*u
  for (std::size_t j = 0; j < n; ++j) ctmp_[j] = sb_[j] + 0.5 * h * Na_[j];
  eval_nonlinear(ctmp_, tn + 0.5 * h, false, Nb_);  // k3
  K.vmul_cc(sc_.data(), E2_.data(), Nb_.data(), n);
  K.vmul_cc(sb_.data(), E_.data(), uhat_.c.data(), n);  // sb now E*u (E2*u consumed)
  for (std::size_t j = 0; j < n; ++j) ctmp_[j] = sb_[j] + h * sc_[j];
  eval_nonlinear(ctmp_, tn + h, false, Nc_);  // k4
  K.vmul_cc(Nu_.data(), E_.data(), Nu_.data(), n);       // E*k1
  for (std::size_t j = 0; j < n; ++j) ctmp_[j] = Na_[j] + Nb_[j];
  K.vmul_cc(ctmp_.data(), E2_.data(), ctmp_.data(), n);  // E2*(k2+k3)
  const double w = h / 6.0;
  for (std::size_t j = 0; j < n; ++j)
    uhat_.c[j] = sb_[j] + w * (Nu_[j] + 2.0 * ctmp_[j] + Nc_[j]);
}

void Stepper::step() {
  if (cfg_.scheme == Scheme::etdrk4)
    step_etdrk4();
  else
    step_if_rk4();
  hermitize(uhat_);
  ++steps_;
}

void Stepper::advance(long nsteps) {
  for (long i = 0; i < nsteps; ++i) step();
}

namespace {

long step_count(const EvolveConfig& cfg) {
  const long n = std::llround(cfg.t_end / cfg.dt);
  if (n < 1 || std::fabs(static_cast<double>(n) * cfg.dt - cfg.t_end) >
                   1e-9 * std::max(1.0, cfg.t_end))
    throw MkdvError("evolve: t_end must be a multiple of dt");
  return n;
}

std::set<long> snapshot_steps(const EvolveConfig& cfg, long n_end) {
  std::set<long> idx{0, n_end};
  for (double s : cfg.snapshot_times)
    idx.insert(std::clamp(static_cast<long>(std::llround(s / cfg.dt)), 0L, n_end));
  return idx;
}

}  // namespace

void run_evolution(const PhysicalField& u0, const EvolveConfig& cfg,
                   const std::function<void(double, const SpectralField&)>& sink) {
  cfg.validate();
  const long n_end = step_count(cfg);
  const std::set<long> snaps = snapshot_steps(cfg, n_end);
  Stepper st(transform(u0), cfg);
  if (snaps.count(0)) sink(0.0, st.uhat());
  for (long i = 1; i <= n_end; ++i) {
    st.step();
    if (snaps.count(i)) sink(static_cast<double>(i) * cfg.dt, st.uhat());
  }
}

std::pair<PhysicalField, PhysicalField> scaling_action(const RunState& state, int sign,
                                                       double a_t) {
  const PhysicalField& u = state.u;
  const Grid& g = *u.grid;
  const std::size_t n = static_cast<std::size_t>(g.n);
  const auto& K = kernels::active();
  PhysicalField ux = differentiate(u, 1);
  PhysicalField uxxx = differentiate(u, 3);
  std::vector<double> w(n);
  K.vcube(w.data(), u.v.data(), n);
  PhysicalField wf(u.grid, std::move(w));
  PhysicalField wx = differentiate(wf, 1);
  PhysicalField Su(u.grid);
  const double s3t = 3.0 * state.t;
  for (std::size_t i = 0; i < n; ++i)
    Su.v[i] = u.v[i] + g.x[i] * ux.v[i] - s3t * (uxxx.v[i] + sign * a_t * wx.v[i]);
  PhysicalField ISu = antiderivative(Su, 1e-6);
  return {std::move(Su), std::move(ISu)};
}

std::vector<RunState> evolve_linearized(const PhysicalField& v0, double c,
                                        const EvolveConfig& cfg) {
  if (!(c > 0.0) || !std::isfinite(c)) throw MkdvError("evolve_linearized: c must be positive");
  EvolveConfig lc = cfg;
  lc.nonlinearity = Nonlinearity::linear_potential;
  lc.frame_speed = c;
  lc.validate();
  const Grid& g = *v0.grid;
  PhysicalField pot(v0.grid);  // Q_c^2 = 2c sech^2(sqrt(c) y)
  const double rc = std::sqrt(c);
  for (int i = 0; i < g.n; ++i) {
    const double s = 1.0 / std::cosh(rc * g.x[i]);
    pot.v[i] = 2.0 * c * s * s;
  }
  PhysicalField z0 = v0;
  if (lc.weight_a != 0.0)
    for (int i = 0; i < g.n; ++i) z0.v[i] *= std::exp(lc.weight_a * g.x[i]);
  require_finite(z0.v, "weighted initial data");
  const long n_end = step_count(lc);
  const std::set<long> snaps = snapshot_steps(lc, n_end);
  const Conserved base = conserved_quantities(z0);
  Stepper st(transform(z0), lc, pot);
  std::vector<RunState> out;
  if (snaps.count(0)) out.push_back({0.0, z0, base});
  for (long i = 1; i <= n_end; ++i) {
    st.step();
    if (snaps.count(i)) out.push_back({static_cast<double>(i) * lc.dt, st.u(), base});
  }
  return out;
}

}  // namespace mkdv
