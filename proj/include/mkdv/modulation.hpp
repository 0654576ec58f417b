#pragma once

#include <map>
#include <string>
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/weights.hpp"

namespace mkdv {

// Decomposition u(x) = Q_c(x - X) + v(x - X) with (v, zeta^i_c) = 0. `shift`
// is the absolute soliton center X; the track below keeps the bookkeeping
// h(t) = int_0^t c - X(t).
struct ModulationFit {
  double c = 0.0;
  double shift = 0.0;
  double residual = 0.0;  // l2 of the two pairings at acceptance
  int iters = 0;
};

// Newton solve of the two orthogonality constraints. tol = tol_factor*||u||.
// Throws (with the last residual in the message) if max_iters is exhausted:
// the datum left the tubular neighborhood of the soliton family.
ModulationFit fit_modulation(const PhysicalField& u, double c_guess, double shift_guess,
                             double tol_factor = 1e-10, int max_iters = 25);

struct ModulationTrack {
  std::vector<double> times, c, h, constraint_residuals;
  std::vector<int> newton_iters;
  // X(t_k) = (running trapezoid of c) - h; the exact centers used by the fit.
  std::vector<double> centers() const;
};

// Free-flow part of the Mizumachi split: evolve v0 under plain mKdV in the
// lab frame, then resample each track snapshot into the moving y-frame by
// exact spectral shift. Returned fields align 1:1 with track.times.
std::vector<PhysicalField> evolve_v1(const PhysicalField& v0, const ModulationTrack& track,
                                     double dt, int sign = +1);

struct StabilityParams {
  double dt = 2e-3;
  int snapshots = 100;
  double delta_w = 0.1;       // tanh-half and virial weight rate
  double weight_a = 0.0;      // exponential rate; 0 selects sqrt(c0/3)/2
  double exp_window = 25.0;   // e^{ay} norms windowed to |y| <= exp_window/a
};

struct StabilityReport {
  double c0 = 0.0, m = 0.0, T = 0.0, dt = 0.0, eps0 = 0.0;
  ModulationTrack track;
  std::map<std::string, std::vector<double>> norms;  // name -> series over track.times
  // name -> (slope, r2) of log-log tail fits over [T/2, T]
  std::map<std::string, std::pair<double, double>> fitted_exponents;
  std::vector<double> cdot_scaled, hdot_scaled;  // <t>^{2m} |c'|, <t>^{2m} |h'|
  double c_plus = 0.0, h_plus = 0.0;
  std::vector<double> virial_ledger;
  double virial_max_increase = 0.0;  // largest ledger uptick, relative to ledger[0]
};

// Full pipeline: evolve Q_{c0} + v0, track (c, h), split v = v1 + v2, record
// weighted norms, exponent fits, scaled modulation rates and the virial
// ledger. Requires m > 1/2.
StabilityReport stability_experiment(double c0, const PhysicalField& v0, double T, double m,
                                     const StabilityParams& params = {});

// chi_{k,delta} factory that rejects (A_k, delta) combinations failing the
// chi' >= 0, chi'' <~ delta chi', chi''' <~ delta^2 chi' conditions on `g`.
WeightSpec virial_weight(int k, double delta, double sigma, double x0, const Grid& g);

// Ledger t -> int chi ( v1^2 + (d_y v1)^2 ) over a y-frame field sequence.
std::vector<double> virial_diagnostic(const std::vector<PhysicalField>& v1_frames,
                                      const WeightSpec& w, const std::vector<double>& times);

}  // namespace mkdv
