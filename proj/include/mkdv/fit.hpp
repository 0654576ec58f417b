#pragma once

#include <vector>

namespace mkdv {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

// Ordinary least squares y = slope*x + intercept; needs >= 3 points.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// Power-law fit y = C * x^slope via log-log least squares; x, y must be > 0.
LinearFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mkdv
