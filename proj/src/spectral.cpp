#include "mkdv/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mkdv/fft.hpp"
#include "mkdv/kernels.hpp"

namespace mkdv {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;  // sqrt(2*pi)

inline double alt_sign(int j) { return (j & 1) ? -1.0 : 1.0; }
}  // namespace

SpectralField transform(const PhysicalField& f) {
  require_finite(f.v, "transform");
  const Grid& g = *f.grid;
  std::vector<cplx> in(g.n), out(g.n);
  for (int i = 0; i < g.n; ++i) in[i] = cplx(f.v[i], 0.0);
  fft::forward(in.data(), out.data(), g.n);
  const double scale = g.spacing / kSqrt2Pi;
  for (int j = 0; j < g.n; ++j) out[j] *= scale * alt_sign(j);
  return SpectralField(f.grid, std::move(out), true);
}

PhysicalField inverse_transform(const SpectralField& F) {
  require_finite(F.c, "inverse_transform");
  const Grid& g = *F.grid;
  std::vector<cplx> in(g.n), out(g.n);
  for (int j = 0; j < g.n; ++j) in[j] = F.c[j] * alt_sign(j);
  fft::backward(in.data(), out.data(), g.n);
  const double scale = g.dk() / kSqrt2Pi;
  PhysicalField u(F.grid);
  for (int i = 0; i < g.n; ++i) u.v[i] = out[i].real() * scale;
  return u;
}

SpectralField differentiate(const SpectralField& F, int order) {
  if (order < 1 || order > 3) throw MkdvError("differentiate: order must be 1, 2 or 3");
  const Grid& g = *F.grid;
  SpectralField D(F.grid);
  D.real_valued = F.real_valued;
  for (int j = 0; j < g.n; ++j) {
    cplx m(1.0, 0.0);
    const cplx ik(0.0, g.k[j]);
    for (int p = 0; p < order; ++p) m *= ik;
    D.c[j] = F.c[j] * m;
  }
  if (order % 2 == 1) D.c[g.nyquist_index()] = 0.0;  // keep real fields real
  return D;
}

PhysicalField differentiate(const PhysicalField& f, int order) {
  return inverse_transform(differentiate(transform(f), order));
}

SpectralField fractional_abs_derivative(const SpectralField& F, double alpha) {
  const Grid& g = *F.grid;
  SpectralField D(F.grid);
  D.real_valued = F.real_valued;
  for (int j = 0; j < g.n; ++j) D.c[j] = F.c[j] * std::pow(std::fabs(g.k[j]), alpha);
  return D;
}

PhysicalField antiderivative(const PhysicalField& f, double mean_tol) {
  const Grid& g = *f.grid;
  const double m = mean(f);
  const double mx = max_abs(f);
  if (mx > 0.0 && std::fabs(m) > mean_tol * mx)
    throw MkdvError("antiderivative: field mean " + std::to_string(m) +
                    " exceeds tolerance " + std::to_string(mean_tol * mx) +
                    " (periodic antiderivative ill-posed)");
  SpectralField F = transform(f);
  SpectralField G(f.grid);
  for (int j = 1; j < g.n; ++j) {
    if (j == g.nyquist_index()) continue;  // unpaired odd mode, drop
    G.c[j] = F.c[j] / cplx(0.0, g.k[j]);
  }
  PhysicalField out = inverse_transform(G);
  const double pin = out.v[0];
  for (double& v : out.v) v -= pin;  // vanish at the left edge
  return out;
}

double quadrature(const PhysicalField& f) {
  return f.grid->spacing * kernels::active().sum(f.v.data(), f.v.size());
}

double inner_product(const PhysicalField& a, const PhysicalField& b) {
  require_same_grid(a.grid, b.grid, "inner_product");
  return a.grid->spacing * kernels::active().dot(a.v.data(), b.v.data(), a.v.size());
}

double l2_norm(const PhysicalField& f) {
  return std::sqrt(std::max(0.0, inner_product(f, f)));
}

double max_abs(const PhysicalField& f) {
  return kernels::active().max_abs(f.v.data(), f.v.size());
}

double mean(const PhysicalField& f) { return quadrature(f) / f.grid->length; }

double weighted_norm(const PhysicalField& f, const WeightSpec& w, int sobolev_order,
                     double weight_time) {
  if (sobolev_order < 0 || sobolev_order > 2)
    throw MkdvError("weighted_norm: sobolev_order must be 0, 1 or 2");
  const Grid& g = *f.grid;
  std::vector<double> wv = w.evaluate(g, weight_time);
  std::vector<double> wsq(g.n);
  kernels::active().vmul_rr(wsq.data(), wv.data(), wv.data(), g.n);

  SpectralField F = transform(f);
  double total = 0.0;
  std::vector<double> integrand(g.n, 0.0);
  PhysicalField d = f;
  for (int s = 0; s <= sobolev_order; ++s) {
    if (s > 0) d = inverse_transform(differentiate(F, s));
    total += kernels::active().dot3(d.v.data(), d.v.data(), wsq.data(), g.n);
    for (int i = 0; i < g.n; ++i) integrand[i] += wsq[i] * d.v[i] * d.v[i];
  }
  if (w.kind == WeightSpec::Kind::exponential) {
    const double mx = *std::max_element(integrand.begin(), integrand.end());
    const double edge = std::max(integrand.front(), integrand.back());
    if (mx > 0.0 && edge > 1e-10 * mx)
      throw MkdvError("weighted_norm: weighted integrand not edge-decayed (edge/max = " +
                      std::to_string(edge / mx) + "); domain too small for this weight");
  }
  return std::sqrt(std::max(0.0, g.spacing * total));
}

void hermitize(SpectralField& F) {
  const int n = F.grid->n;
  F.c[0] = cplx(F.c[0].real(), 0.0);
  F.c[n / 2] = cplx(F.c[n / 2].real(), 0.0);
  for (int j = 1; j < n / 2; ++j) {
    const cplx avg = 0.5 * (F.c[j] + std::conj(F.c[n - j]));
    F.c[j] = avg;
    F.c[n - j] = std::conj(avg);
  }
  F.real_valued = true;
}

SpectralField shift(const SpectralField& F, double s) {
  const Grid& g = *F.grid;
  SpectralField G(F.grid);
  G.real_valued = F.real_valued;
  for (int j = 0; j < g.n; ++j) {
    const double ph = g.k[j] * s;
    G.c[j] = F.c[j] * cplx(std::cos(ph), std::sin(ph));
  }
  // Nyquist has no conjugate partner: shift it as the cosine mode it stands for.
  const int ny = g.nyquist_index();
  G.c[ny] = F.c[ny] * std::cos(g.k[ny] * s);
  return G;
}

std::vector<double> resample_at(const SpectralField& F, const std::vector<double>& pts) {
  const Grid& g = *F.grid;
  const double scale = g.dk() / kSqrt2Pi;
  const int ny = g.nyquist_index();
  std::vector<double> out(pts.size());
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const double x = pts[p];
    double acc = 0.0;
    for (int j = 0; j < g.n; ++j) {
      if (j == ny) {
        acc += F.c[j].real() * std::cos(g.k[j] * x);
        continue;
      }
      const double ph = g.k[j] * x;
      acc += F.c[j].real() * std::cos(ph) - F.c[j].imag() * std::sin(ph);
    }
    out[p] = acc * scale;
  }
  return out;
}

std::vector<double> dealias_mask(const Grid& g) {
  std::vector<double> m(g.n, 1.0);
  const double kcut = (2.0 / 3.0) * (M_PI / g.spacing);
  for (int j = 0; j < g.n; ++j)
    if (std::fabs(g.k[j]) > kcut) m[j] = 0.0;
  m[g.nyquist_index()] = 0.0;
  return m;
}

double edge_mass_fraction(const PhysicalField& f, double margin_fraction) {
  const Grid& g = *f.grid;
  const double cutoff = 0.5 * g.length - margin_fraction * g.length;
  double edge = 0.0, total = 0.0;
  for (int i = 0; i < g.n; ++i) {
    const double m = f.v[i] * f.v[i];
    total += m;
    if (std::fabs(g.x[i]) > cutoff) edge += m;
  }
  return total > 0.0 ? edge / total : 0.0;
}

}  // namespace mkdv
