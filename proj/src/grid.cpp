#include "mkdv/grid.hpp"

#include <cmath>

namespace mkdv {

Grid::Grid(int n_, double L) : n(n_), length(L) {
  if (n < 16 || (n % 2) != 0) throw MkdvError("grid: n must be even and >= 16");
  if (!(L > 0.0) || !std::isfinite(L)) throw MkdvError("grid: L must be positive finite");
  spacing = L / n;
  x.resize(n);
  k.resize(n);
  for (int i = 0; i < n; ++i) x[i] = -0.5 * L + spacing * i;
  const double dk = 2.0 * M_PI / L;
  for (int j = 0; j < n; ++j) {
    const int jj = (j < n / 2) ? j : j - n;
    k[j] = dk * jj;
  }
}

PhysicalField::PhysicalField(GridPtr g, std::vector<double> vals)
    : grid(std::move(g)), v(std::move(vals)) {
  if (static_cast<int>(v.size()) != grid->n)
    throw MkdvError("PhysicalField: value count does not match grid");
}

SpectralField::SpectralField(GridPtr g, std::vector<cplx> coeffs, bool real)
    : grid(std::move(g)), c(std::move(coeffs)), real_valued(real) {
  if (static_cast<int>(c.size()) != grid->n)
    throw MkdvError("SpectralField: coefficient count does not match grid");
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double a : v)
    if (!std::isfinite(a)) throw MkdvError(std::string(what) + ": non-finite value");
}

void require_finite(const std::vector<cplx>& v, const char* what) {
  for (const cplx& a : v)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw MkdvError(std::string(what) + ": non-finite value");
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (a.get() == b.get()) return;
  if (a->n != b->n || a->length != b->length)
    throw MkdvError(std::string(what) + ": fields live on different grids");
}

}  // namespace mkdv
