#pragma once
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/weights.hpp"

namespace mkdv {

// Discrete transforms normalized to the continuum 1/sqrt(2*pi) convention:
//   uhat(k_j) = (dx/sqrt(2*pi)) * sum_i e^{-i k_j x_i} u(x_i)
//   u(x_i)    = (dk/sqrt(2*pi)) * sum_j e^{+i k_j x_i} uhat(k_j)
// with x centered at the domain midpoint (the e^{i k L/2} = (-1)^j phase is
// folded into the coefficients). Parseval: dx*sum u^2 = dk*sum |uhat|^2.
SpectralField transform(const PhysicalField& f);
PhysicalField inverse_transform(const SpectralField& F);

// coefficient j multiplied by (i k_j)^order; Nyquist zeroed for odd orders.
SpectralField differentiate(const SpectralField& F, int order);
PhysicalField differentiate(const PhysicalField& f, int order);

// |partial_x|^alpha as the |k|^alpha multiplier.
SpectralField fractional_abs_derivative(const SpectralField& F, double alpha);

// Spectral antiderivative g with g' = f and g(x_left) = 0. Requires
// |mean(f)| <= mean_tol * max|f| (default 1e-8): the relevant fields are
// perfect derivatives, a violation flags an ill-posed diagnostic.
PhysicalField antiderivative(const PhysicalField& f, double mean_tol = 1e-8);

// ||f||_{H^s_w}^2 = sum_{k<=s} ||w * d^k f||_{L2}^2, s in {0,1,2}. For
// exponential weights the weighted integrand must be edge-decayed
// (< 1e-10 of its max at the boundary), else the domain is too small.
double weighted_norm(const PhysicalField& f, const WeightSpec& w, int sobolev_order,
                     double weight_time = 0.0);

// Spectrally exact integral of a smooth periodic field: dx * sum f_i.
double quadrature(const PhysicalField& f);

// -------- utility layer ------------------------------------------------------
double inner_product(const PhysicalField& a, const PhysicalField& b);  // int a*b dx
double l2_norm(const PhysicalField& f);
double max_abs(const PhysicalField& f);
double mean(const PhysicalField& f);

// Enforce exact Hermitian symmetry (mode0/Nyquist made real, c_{-j}=conj c_j).
void hermitize(SpectralField& F);

// f(x + s) by phase multiplication (Nyquist handled as a cosine mode).
SpectralField shift(const SpectralField& F, double s);

// Band-limited evaluation of the Fourier series at arbitrary points.
std::vector<double> resample_at(const SpectralField& F, const std::vector<double>& pts);

// 2/3-rule dealias mask in FFT order (1 keep, 0 zero; Nyquist always 0).
std::vector<double> dealias_mask(const Grid& g);

// Fraction of the L2 mass sitting within `margin_fraction`*L of either edge.
double edge_mass_fraction(const PhysicalField& f, double margin_fraction = 1.0 / 16.0);

}  // namespace mkdv
