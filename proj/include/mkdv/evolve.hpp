#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

enum class Scheme { if_rk4, etdrk4 };

// Right-hand side shape. `cubic` is the mKdV term -sign*a(t)*d_x(u^3);
// `linear_potential` is the linearized term -3*D(Q_c^2 v) used by the
// co-moving semigroup; `none` leaves the pure dispersive flow.
enum class Nonlinearity { cubic, linear_potential, none };

struct EvolveConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::etdrk4;
  bool dealias = true;
  int sign = +1;  // focusing(+1) / defocusing(-1)
  std::function<double(double)> a_of_t;  // null means a(t) = 1
  std::vector<double> snapshot_times;    // sorted, within [0, t_end]

  Nonlinearity nonlinearity = Nonlinearity::cubic;
  // Co-moving frame: adds c*D to the linear symbol (y = x - c t).
  double frame_speed = 0.0;
  // Conjugated exponential weight: the evolved variable is z = e^{a y} v and
  // every d_y becomes D = ik - a. Re(symbol) = -a(c + 3k^2 - a^2) < 0 for
  // 0 < a < sqrt(c), so weighted radiation is damped instead of wrapping.
  double weight_a = 0.0;
  double blowup_factor = 100.0;  // abort when ||u||_inf exceeds this * initial

  void validate() const;  // throws MkdvError on a bad combination
};

struct Conserved {
  double mass = 0.0;      // int u^2
  double energy = 0.0;    // int (1/2 u_x^2 - 1/4 u^4)
  double momentum = 0.0;  // int u
};

Conserved conserved_quantities(const PhysicalField& u);

struct RunState {
  double t = 0.0;
  PhysicalField u;
  Conserved baseline;
};

struct BlowUpError : MkdvError {
  double t;
  BlowUpError(const std::string& msg, double when) : MkdvError(msg), t(when) {}
};

// Fixed-step integrator with the linear symbol treated exactly. ETDRK4
// coefficients use contour averaging (32 half-offset points on a unit
// circle around dt*L_k) so small |dt*L_k| never cancels.
class Stepper {
 public:
  Stepper(const SpectralField& u0, const EvolveConfig& cfg);
  // linear_potential runs pass the potential profile V(y) with N = -3 D(V z).
  Stepper(const SpectralField& u0, const EvolveConfig& cfg, const PhysicalField& potential);

  void step();
  void advance(long nsteps);

  double t() const;
  long steps_taken() const { return steps_; }
  const SpectralField& uhat() const { return uhat_; }
  PhysicalField u() const;

 private:
  void prepare_coefficients();
  // out = multiplier * (transform of pointwise nonlinearity) at stage time.
  void eval_nonlinear(const std::vector<cplx>& in, double t_stage, bool check_blowup,
                      std::vector<cplx>& out);
  void to_phys(const std::vector<cplx>& c, std::vector<double>& u);
  void to_spec(const std::vector<double>& u, std::vector<cplx>& c);
  void step_etdrk4();
  void step_if_rk4();

  GridPtr grid_;
  EvolveConfig cfg_;
  SpectralField uhat_;
  std::vector<double> potential_;
  long steps_ = 0;
  double u0_maxabs_ = 0.0;

  std::vector<cplx> E_, E2_, Q_, f1_, f2d_, f3_;  // per-mode ETD weights
  std::vector<cplx> mult_;                        // nonlinear projection -sign*D*mask (or -3*D*mask)
  std::vector<cplx> Nu_, Na_, Nb_, Nc_, sa_, sb_, sc_, ctmp_, cwork_;
  std::vector<double> p1_, p2_;
};

// Drives a Stepper from t=0 to t_end; calls sink at t=0, at every snapshot
// time (rounded to the step grid), and at t_end.
void run_evolution(const PhysicalField& u0, const EvolveConfig& cfg,
                   const std::function<void(double, const SpectralField&)>& sink);

// S = 1 + x d_x + 3t d_t along the flow: Su = u + x u_x - 3t (u_xxx + sign*a*(u^3)_x),
// and ISu its antiderivative. x is the centered coordinate.
std::pair<PhysicalField, PhysicalField> scaling_action(const RunState& state, int sign = +1,
                                                       double a_t = 1.0);

// Linearized flow around Q_c in the co-moving frame:
//   d_t v = c D v - D^3 v - 3 D(Q_c^2 v),  D = d_y.
// With cfg.weight_a = a != 0 the evolved (and returned) variable is
// z = e^{a y} v, whose plain L2 norm is the weighted norm ||v||_{L2_a}.
// Returns states at cfg.snapshot_times (plus t=0 and t_end).
std::vector<RunState> evolve_linearized(const PhysicalField& v0, double c,
                                        const EvolveConfig& cfg);

}  // namespace mkdv
