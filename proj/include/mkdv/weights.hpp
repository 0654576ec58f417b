#pragma once
#include <vector>

#include "mkdv/grid.hpp"

namespace mkdv {

// The three weight families used by the diagnostics, plus the virial family:
//   tanh_half:   w(x) = (1 + tanh(delta*x))^{1/2}
//   exponential: w(x) = e^{a*x}            (legal with a soliton of speed c
//                                           only for 0 < a < sqrt(c/3))
//   poly_plus:   w(x) = <x_+>^m = (1 + max(x,0)^2)^{m/2}
//   virial:      chi_{k,delta}(y) = (A_k + (delta*y)^2)^k (1 + tanh(delta*y)),
//                evaluated at y + sigma*t + x0 (drifting window).
struct WeightSpec {
  enum class Kind { tanh_half, exponential, poly_plus, virial };
  Kind kind = Kind::tanh_half;
  double delta = 0.5;
  double a = 0.0;
  double m = 0.0;
  int k = 0;
  double A_k = 1.0;
  double sigma = 0.0;
  double x0 = 0.0;

  static WeightSpec tanh_half(double delta);
  static WeightSpec exponential(double a);
  static WeightSpec poly_plus(double m);
  static WeightSpec virial(int k, double delta, double sigma, double x0, double A_k = 0.0);

  // Pointwise weight samples; `t` only matters for the virial kind.
  std::vector<double> evaluate(const Grid& g, double t = 0.0) const;
  double evaluate_at(double x, double t = 0.0) const;
};

// chi' >= 0, chi'' <= C*delta*chi', chi''' <= C*delta^2*chi' checked by direct
// evaluation on the grid (the virial weight is only usable when these hold).
bool virial_conditions_ok(const WeightSpec& w, const Grid& g, double C = 10.0);

}  // namespace mkdv
