#pragma once

#include <boost/rational.hpp>

#include <array>
#include <functional>
#include <vector>

#include "mkdv/spectral.hpp"

namespace mkdv {

// Trilinear resonance phase phi(xi, eta, sigma) = xi^3 - (xi-eta-sigma)^3
// - eta^3 - sigma^3 = 3 (eta+sigma)(xi-eta)(xi-sigma) and its geometry.
struct PhaseSpec {
    double xi = 0.0;

    double phi(double eta, double sigma) const {
        return 3.0 * (eta + sigma) * (xi - eta) * (xi - sigma);
    }
    double phi_cubic(double eta, double sigma) const {
        const double m = xi - eta - sigma;
        return xi * xi * xi - m * m * m - eta * eta * eta - sigma * sigma * sigma;
    }
    void grad(double eta, double sigma, double& g_eta, double& g_sigma) const {
        g_eta = 3.0 * (xi - sigma) * (xi - 2.0 * eta - sigma);
        g_sigma = 3.0 * (xi - eta) * (xi - eta - 2.0 * sigma);
    }
    double det_hess(double eta, double sigma) const {
        return -36.0 * (eta * eta + sigma * sigma + eta * sigma - xi * eta -
                        xi * sigma);
    }
    double hess_eta_eta(double /*eta*/, double sigma) const {
        return -6.0 * (xi - sigma);
    }
};

struct StationaryPoint {
    double eta = 0.0, sigma = 0.0;
    double phi = 0.0;
    double det_hess = 0.0;
    // 0 at saddles; count of positive eigenvalues at definite points
    // (0 for negative definite, 2 for positive definite).
    int signature = 0;
    bool degenerate = false;  // xi == 0 collapses all four points
};

// The four critical points {(xi,xi), (xi,-xi), (-xi,xi), (xi/3,xi/3)}.
std::vector<StationaryPoint> stationary_points(double xi);

using Rat = boost::rational<long long>;

struct RationalStationaryPoint {
    Rat eta, sigma, phi, det_hess;
    int signature = 0;
};

// Same data in exact rational arithmetic (polynomial identities, no
// tolerances).  Requires xi != 0.
std::vector<RationalStationaryPoint> stationary_points_exact(const Rat& xi);

// Continuous evaluation of a spectral profile at arbitrary wavenumber via
// cubic interpolation on the (ascending-k) coefficient table, with an upper
// envelope of |f| for support pruning.  Values beyond the band where
// |f| >= 1e-12 * max|f| are treated as zero.
class ProfileInterp {
  public:
    explicit ProfileInterp(const SpectralField& f);
    cplx operator()(double k) const;
    double max_abs() const { return fmax_; }
    double band_limit() const { return kmax_; }
    // sup |f| over [klo, khi], padded by one grid spacing
    double envelope(double klo, double khi) const;

  private:
    std::vector<double> ks_;
    std::vector<cplx> fs_;
    std::vector<std::vector<double>> table_;  // sparse max table over |f|
    double dk_ = 0.0, fmax_ = 0.0, kmax_ = 0.0;
};

struct QuadResult {
    cplx value{0.0, 0.0};
    double est_error = 0.0;  // sampled 4x4-vs-3x3 Gauss difference, heuristic
    long cells = 0;
};

// Direct adaptive quadrature of
//   d_t fhat(t, xi) = -(i xi / 2 pi) * II e^{-i t phi} f(xi-eta-sigma) f(eta) f(sigma)
// over the resolved support of f.  Throws when the cell budget is exhausted,
// reporting the partial estimate in the message.
QuadResult dtf_quadrature(const SpectralField& fhat, double t, double xi,
                          long cell_budget = 300000000L);

struct DtfAsymptotic {
    cplx resonant{0.0, 0.0};      // -(i sign xi / 2 t) |f(xi)|^2 f(xi): total of
                                  // the three resonance-set stationary points
    cplx single_point{0.0, 0.0};  // one point's share, -(i sign xi / 6 t)|f|^2 f
    cplx airy{0.0, 0.0};  // (i c / t) e^{osc_sign i t (8/9) xi^3} f(xi/3)^3
    cplx c{0.0, 0.0};     // measured constant from the stationary-phase data
    int osc_sign = -1;
};

// Leading terms of d_t fhat from the resonance geometry; the Airy-term
// constant c is computed from the (xi/3, xi/3) stationary-phase data, never
// hard-coded.  osc_sign picks the candidate oscillation e^{osc_sign i t ...}.
DtfAsymptotic dtf_asymptotic(const SpectralField& fhat, double t, double xi,
                             int osc_sign = -1);

// Resolves the sign of the Airy-term oscillation by correlating the
// quadrature (minus the resonant term) against both candidates over the
// given times.  Returns -1 or +1; the two correlation magnitudes are
// reported through the optional pointers.
int resolve_airy_phase_sign(const SpectralField& fhat, double xi,
                            const std::vector<double>& times,
                            double* corr_minus = nullptr,
                            double* corr_plus = nullptr,
                            long cell_budget = 300000000L);

// ---- standalone 2-D stationary phase ----------------------------------------

struct Phase2dSpec {
    std::function<double(double, double)> psi;
    std::function<std::array<double, 2>(double, double)> grad;
    bool has_critical_point = false;
    double eta0 = 0.0, sigma0 = 0.0;  // the critical point (if any)
    double psi0 = 0.0;                // psi at the point
    double det_hess = 1.0;            // |det Hess psi| >= 1 required
    int signature = 0;                // sum of Hessian eigenvalue signs
};

struct StationaryPhase2dPoint {
    double lambda = 0.0;
    cplx quadrature{0.0, 0.0};
    cplx leading{0.0, 0.0};
    double remainder = 0.0;
    double quad_error = 0.0;
};

struct StationaryPhase2dResult {
    std::vector<StationaryPhase2dPoint> ladder;
    double fitted_order = 0.0;  // -slope of log remainder vs log lambda
};

// Evaluates II F e^{i lambda psi} over the box for each lambda, together
// with the leading term 2 pi e^{i pi s/4} / sqrt(det) * e^{i lambda psi0}
// F(P) / lambda (zero when there is no critical point), and fits the decay
// order of the remainder.
StationaryPhase2dResult stationary_phase_2d(
    const Phase2dSpec& phase, const std::function<double(double, double)>& F,
    const std::array<double, 4>& box,  // {eta_lo, eta_hi, sigma_lo, sigma_hi}
    const std::vector<double>& lambdas, long cell_budget = 100000000L);

}  // namespace mkdv
