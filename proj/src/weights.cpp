#include "mkdv/weights.hpp"

#include <cmath>

namespace mkdv {

WeightSpec WeightSpec::tanh_half(double delta) {
  WeightSpec w;
  w.kind = Kind::tanh_half;
  w.delta = delta;
  return w;
}

WeightSpec WeightSpec::exponential(double a) {
  WeightSpec w;
  w.kind = Kind::exponential;
  w.a = a;
  return w;
}

WeightSpec WeightSpec::poly_plus(double m) {
  WeightSpec w;
  w.kind = Kind::poly_plus;
  w.m = m;
  return w;
}

WeightSpec WeightSpec::virial(int k, double delta, double sigma, double x0, double A_k) {
  WeightSpec w;
  w.kind = Kind::virial;
  w.k = k;
  w.delta = delta;
  w.sigma = sigma;
  w.x0 = x0;
  // A_k <= 0 requests auto-selection; A_k > k^2/4 keeps chi monotone, take
  // k^2 (min 1) for slack in the chi''/chi' ratio too.
  w.A_k = (A_k > 0.0) ? A_k : std::max(1.0, double(k) * double(k));
  return w;
}

namespace {

// 1 + tanh(q) without the catastrophic cancellation the naive form hits for
// q <= -18 (where tanh rounds to -1 and the sum is quantized to ulp steps).
double one_plus_tanh(double q) { return 2.0 / (1.0 + std::exp(-2.0 * q)); }

}  // namespace

double WeightSpec::evaluate_at(double x, double t) const {
  switch (kind) {
    case Kind::tanh_half:
      return std::sqrt(one_plus_tanh(delta * x));
    case Kind::exponential:
      return std::exp(a * x);
    case Kind::poly_plus: {
      const double xp = x > 0.0 ? x : 0.0;
      return std::pow(1.0 + xp * xp, 0.5 * m);
    }
    case Kind::virial: {
      const double y = x + sigma * t + x0;
      const double q = delta * y;
      return std::pow(A_k + q * q, k) * one_plus_tanh(q);
    }
  }
  return 0.0;
}

std::vector<double> WeightSpec::evaluate(const Grid& g, double t) const {
  std::vector<double> w(g.n);
  for (int i = 0; i < g.n; ++i) w[i] = evaluate_at(g.x[i], t);
  return w;
}

// Direct finite-difference check of the virial weight shape conditions.
// h must stay well above the cube root of machine epsilon: the third
// difference divides by 2h^3, so h = 1e-2 keeps its roundoff near 1e-10
// while the O(h^2) truncation is still far below the slack.
bool virial_conditions_ok(const WeightSpec& w, const Grid& g, double C) {
  if (w.kind != WeightSpec::Kind::virial) return false;
  const double h = 1e-2;
  for (int i = 0; i < g.n; ++i) {
    const double y = g.x[i];
    auto chi = [&](double z) { return w.evaluate_at(z, 0.0); };
    const double slack = 1e-7 * std::max(1.0, std::fabs(chi(y)));
    const double c1 = (chi(y + h) - chi(y - h)) / (2 * h);
    const double c2 = (chi(y + h) - 2 * chi(y) + chi(y - h)) / (h * h);
    const double c3 =
        (chi(y + 2 * h) - 2 * chi(y + h) + 2 * chi(y - h) - chi(y - 2 * h)) / (2 * h * h * h);
    if (c1 < -slack) return false;  // chi' >= 0 up to FD noise
    if (std::fabs(c2) > C * w.delta * c1 + slack) return false;
    if (std::fabs(c3) > C * w.delta * w.delta * c1 + slack) return false;
  }
  return true;
}

}  // namespace mkdv
