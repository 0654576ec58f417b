#pragma once
#include <cmath>
#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace mkdv {

using cplx = std::complex<double>;

struct MkdvError : std::runtime_error {
  explicit MkdvError(const std::string& msg) : std::runtime_error(msg) {}
};

// Periodic grid on [-L/2, L/2): x_i = -L/2 + i*dx. Wavenumbers are stored in
// FFT order, k[j] = 2*pi*jj/L with jj = j for j < n/2 and jj = j - n above,
// so the Nyquist mode sits at index n/2 with the negative sign convention.
struct Grid {
  int n = 0;
  double length = 0.0;
  double spacing = 0.0;
  std::vector<double> x;
  std::vector<double> k;

  Grid(int n_, double L);
  double dk() const { return 2.0 * M_PI / length; }
  int nyquist_index() const { return n / 2; }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int n, double L) { return std::make_shared<Grid>(n, L); }

struct PhysicalField {
  GridPtr grid;
  std::vector<double> v;

  PhysicalField() = default;
  explicit PhysicalField(GridPtr g) : grid(std::move(g)), v(grid->n, 0.0) {}
  PhysicalField(GridPtr g, std::vector<double> vals);
  int n() const { return grid->n; }
};

struct SpectralField {
  GridPtr grid;
  std::vector<cplx> c;
  bool real_valued = true;  // field represents a real function (Hermitian coeffs)

  SpectralField() = default;
  explicit SpectralField(GridPtr g) : grid(std::move(g)), c(grid->n, cplx(0.0)) {}
  SpectralField(GridPtr g, std::vector<cplx> coeffs, bool real = true);
  int n() const { return grid->n; }
};

void require_finite(const std::vector<double>& v, const char* what);
void require_finite(const std::vector<cplx>& v, const char* what);
void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what);

}  // namespace mkdv
