#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pinndarts {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moment estimates for one parameter group.
struct AdamState {
  explicit AdamState(std::size_t size = 0, AdamConfig config = {})
      : config(config), m(size, 0.0), v(size, 0.0) {}

  AdamConfig config;
  std::vector<double> m;
  std::vector<double> v;
  std::size_t steps = 0;
};

// Bias-corrected Adam update of `params` in place:
//   m = b1 m + (1 - b1) g,  v = b2 v + (1 - b2) g^2
//   p -= lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
// Throws DimensionError on size mismatch and NumericalError on non-finite
// gradient entries (state and parameters are left untouched).
void adam_step(AdamState& state, std::span<const double> gradient, std::span<double> params, double lr);

}  // namespace pinndarts
