#pragma once

#include <utility>
#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

struct SolitonParams {
  double c = 1.0;
  double shift = 0.0;
};

// Q_c(y) = sqrt(2c) sech(sqrt(c)(y - shift)) and its closed-form derivatives
// dQ/dy and dQ/dc = (1/2c)(Q + s dQ/ds), s the centered argument. All three
// throw when the profile fails to decay below 1e-10 of its peak at the
// domain edges.
PhysicalField eval_Q(const SolitonParams& p, const GridPtr& grid);
PhysicalField eval_dQ_dy(const SolitonParams& p, const GridPtr& grid);
PhysicalField eval_dQ_dc(const SolitonParams& p, const GridPtr& grid);

// L_c v = d_y(-c v + d_y^2 v + 3 Q_c^2 v), centered soliton.
PhysicalField apply_Lc(const PhysicalField& v, double c);

// Sup-norm residual of the identity dQ/dc = (1/2c) d_y(y Q_c): closed-form
// left side against the spectral-derivative right side.
double miracle_check(double c, const GridPtr& grid);

// Generalized kernel {xi1 = dQ/dy, xi2 = dQ/dc} of L_c and the adjoint pair
//   zeta1 = -alpha1 * int_{-inf}^y dQ/dc + alpha2 * Q_c,   zeta2 = alpha1 * Q_c,
// with (alpha1, alpha2) solved from the biorthogonality conditions
// (xi^i, zeta^j) = delta_ij.
struct KernelPair {
  PhysicalField xi1, xi2, zeta1, zeta2;
  double alpha1 = 0.0, alpha2 = 0.0;
};
KernelPair build_kernel(double c, const GridPtr& grid);

// P v = (v, zeta1) xi1 + (v, zeta2) xi2 and Q v = v - P v.
std::pair<PhysicalField, PhysicalField> project(const PhysicalField& v, const KernelPair& k);

struct DecayReport {
  double c = 0.0, a = 0.0;
  std::vector<double> times;
  std::vector<double> weighted_norms;  // ||v(t)||_{L2_a}
  std::vector<double> leakage;         // ||P v(t)||_{L2_a} / ||v(t)||_{L2_a}
  double fitted_b = 0.0;               // decay rate from log-linear fit on [T/2, T]
  double fit_r2 = 0.0;
};

// Evolves Q_c-projected data under the linearized co-moving flow in the
// conjugated weighted variable and fits the exponential decay rate.
// Requires 0 < a < sqrt(c/3).
DecayReport semigroup_decay_experiment(double c, double a, const PhysicalField& v0, double T,
                                       double dt = 1e-3);

}  // namespace mkdv
