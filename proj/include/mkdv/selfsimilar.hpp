#pragma once

#include <utility>
#include <vector>

#include "mkdv/spectral.hpp"

namespace mkdv {

// Self-similar rescale v(t, xi) = t^{1/3} u(t, t^{1/3} xi) and the Painleve II
// profile phi'' = lambda xi phi - phi^3 that the rescaled solution approaches
// in the central region |x| <= t^{1/3 + 2 gamma}.

struct SelfSimilarSnapshot {
    double t = 0.0;
    std::vector<double> xi;
    std::vector<double> v;
    bool clipped = false;  // requested xi window exceeded the mapped box
};

// Full-box rescale: xi_i = x_i / t^{1/3}, v_i = t^{1/3} u_i.  No resampling,
// so sum(v) dxi == sum(u) dx exactly.
SelfSimilarSnapshot rescale(const PhysicalField& u, double t);

// Windowed rescale onto a uniform xi grid of n_xi points via band-limited
// resampling.  If the window maps outside the box it is clipped and flagged.
SelfSimilarSnapshot rescale(const PhysicalField& u, double t, double xi_lo,
                            double xi_hi, int n_xi);

struct PainleveSolution {
    double lambda = 0.0;   // coefficient selected by the ansatz-residual oracle
    double k = 0.0;        // shooting amplitude: phi ~ k Ai(lambda^{1/3} xi)
    double mass = 0.0;     // regularized integral of phi
    std::vector<double> xi;   // ascending uniform grid
    std::vector<double> phi;
    double ode_residual = 0.0;   // sup |phi'' - lambda xi phi + phi^3| (FD)
    double airy_match = 0.0;     // sup |phi - k Ai| near the right edge
    int secant_iters = 0;
    double selected_residual = 0.0;  // ansatz PDE residual of selected lambda
    double rejected_lambda = 0.0;
    double rejected_residual = 0.0;  // archived residual of the rejected lambda

    double at(double xi_query) const;  // linear interpolation on the grid
};

// PDE residual of the ansatz u = t^{-1/3} phi(x t^{-1/3}) at t = 1, built
// from tabulated samples only: -(1/3)(phi + xi phi') + phi''' + 3 phi^2 phi'
// with all derivatives by centered finite differences.  Vanishes (to FD
// accuracy) exactly when phi solves the lambda = 1/3 equation.
double ansatz_pde_residual(const std::vector<double>& xi,
                           const std::vector<double>& phi);

// Shooting solve of phi'' = lambda xi phi - phi^3 with Airy data at xi_right,
// secant iteration on k until the regularized mass matches mass_target to
// 1e-6.  Both candidate coefficients lambda in {1/3, 3} are solved and the
// one with the smaller ansatz residual is returned; the loser's residual is
// archived in the result.
PainleveSolution solve_painleve(double mass_target, double ode_tol = 1e-8,
                                double xi_left = -30.0, double xi_right = 10.0,
                                double h = 5e-4);

struct SelfSimilarErrorRow {
    double t = 0.0;
    double region_halfwidth = 0.0;  // t^{1/3 + 2 gamma} in x
    double sup_error = 0.0;         // sup |u - t^{-1/3} phi(x t^{-1/3})|
    double normalized_error = 0.0;  // sup_error / t^{-1/3 - 3 gamma / 2}
};

// Compares snapshots of a decaying run against the Painleve profile on the
// central region.  The profile mass must match the run's integral to 1e-4.
std::vector<SelfSimilarErrorRow> compare_self_similar(
    const std::vector<std::pair<double, PhysicalField>>& snaps,
    const PainleveSolution& sol, double gamma);

}  // namespace mkdv
