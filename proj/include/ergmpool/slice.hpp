#pragma once

#include <cmath>
#include <limits>

#include "ergmpool/rng.hpp"

namespace ergmpool {

// Univariate slice sampler with stepping out and shrinkage. `log_density`
// may be unnormalised and must be finite at x0.
template <class LogDensity>
double slice_sample(double x0, LogDensity&& log_density, Rng& rng, double width = 1.0,
                    int max_steps = 64) {
  const double log_y = log_density(x0) + std::log(uniform01(rng));
  double left = x0 - width * uniform01(rng);
  double right = left + width;
  int j = static_cast<int>(std::floor(max_steps * uniform01(rng)));
  int k = max_steps - 1 - j;
  while (j-- > 0 && log_density(left) > log_y) left -= width;
  while (k-- > 0 && log_density(right) > log_y) right += width;
  while (true) {
    const double x = left + (right - left) * uniform01(rng);
    if (log_density(x) > log_y) return x;
    if (x < x0)
      left = x;
    else
      right = x;
    if (right - left < 1e-14 * (1.0 + std::abs(x0))) return x0;
  }
}

}  // namespace ergmpool
