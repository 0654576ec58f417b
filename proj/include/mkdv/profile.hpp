#pragma once

#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

// f(t) = e^{t d_x^3} u(t): undo the free flow, f_hat = e^{-i t k^3} u_hat.
// Requires t >= 1 (the asymptotic analysis starts there).
SpectralField extract_profile(const SpectralField& u_hat, double t);

struct ProfileTrack {
  std::vector<double> times;            // strictly increasing, >= 1
  std::vector<SpectralField> profiles;  // f_hat(t_m)
  void push(double t, const SpectralField& f_hat);
};

// B(t, k) = -(1/2) sign(k) int_{t_0}^t |f_hat(s,k)|^2 ds/s by trapezoid in
// log s; B at the first track time is 0. The -1/2 rate is the sum of the
// three stationary points on the resonance set (each contributes 1/6); it is
// adjudicated against direct FFT evaluation of d_t f_hat in the oscint tests.
struct PhaseTrack {
  std::vector<double> times;
  std::vector<std::vector<double>> B;  // per snapshot, per FFT mode
};
PhaseTrack accumulate_B(const ProfileTrack& track);

struct CauchyPair {
  double t1 = 0.0, t2 = 0.0;
  double sup_diff = 0.0;  // sup over the validity mask of |w(t2) - w(t1)|
};

struct AsymptoticProfile {
  GridPtr grid;
  double t_late = 0.0, gamma = 0.05;
  std::vector<cplx> f_inf, w_inf;  // estimator: both = w_hat(t_late)
  std::vector<char> valid;         // |k| >= t_late^{-1/3+gamma}
  std::vector<CauchyPair> cauchy;  // dyadic pairs, earliest first
  bool cauchy_decreasing = true;   // warning flag when differences fail to shrink

  // |f_inf| at arbitrary xi > 0 by linear interpolation on the k grid.
  cplx f_inf_at(double xi) const;
};

AsymptoticProfile estimate_f_infinity(const ProfileTrack& track, const PhaseTrack& phases,
                                      double t_late, double gamma = 0.05);

struct RegionErrorRow {
  double x = 0.0, xi0 = 0.0;
  double u_num = 0.0, u_pred = 0.0;
  double err = 0.0, err_normalized = 0.0;
};

struct RegionErrorTable {
  double t = 0.0;
  std::vector<RegionErrorRow> rows;  // thinned to <= 256 entries
  double max_normalized = 0.0;       // over every grid point in the region
};

// Pointwise comparison of u(t) in x <= -t^{1/3+2*gamma} against
//   sqrt(2/(3 t xi0)) Re exp(-2it xi0^3 + i pi/4 - (i/2)|f_inf(xi0)|^2 log t) f_inf(xi0),
// xi0 = sqrt(-x/(3t)). The sqrt(2) prefactor is pinned by the exact Airy
// oracle: for the free flow with point data, u = (3t)^{-1/3} Ai(x/(3t)^{1/3}),
// whose negative-argument asymptotics force it. Errors are normalized by the
// remainder scale t^{-1/3} (-x/t^{1/3})^{-3/10}.
RegionErrorTable check_modified_scattering(const SpectralField& u_hat, double t,
                                           const AsymptoticProfile& prof, double gamma = 0.05);

struct DiagnosticRow {
  double t = 0.0;
  double sup_scaled_u = 0.0;     // sup |u| t^{1/3} <x/t^{1/3}>^{1/4}
  double sup_scaled_ux = 0.0;    // sup |u_x| t^{2/3} <x/t^{1/3}>^{-1/4}
  double right_region = 0.0;     // sup_{x >= t^{1/3}} |u| t^{1/3} (x/t^{1/3})^{3/4}
  double bilinear = 0.0;         // t sup |u u_x|
  double trilinear_0 = 0.0;      // t^{5/6} ||u^3||_{L2}
  double trilinear_04 = 0.0;     // t^{5/6 + 0.4/3} |||d_x|^{0.4} u^3||_{L2}
};

DiagnosticRow dispersive_diagnostics(const SpectralField& u_hat, double t);

}  // namespace mkdv
