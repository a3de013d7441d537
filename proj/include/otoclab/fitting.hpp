#pragma once

#include <span>

namespace otoclab {

// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace otoclab
