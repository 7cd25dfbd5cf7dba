#include "pinndarts/train/adam.hpp"

#include <cmath>

#include "pinndarts/error.hpp"
#include "pinndarts/nn/batch.hpp"

namespace pinndarts {

void adam_step(AdamState& state, std::span<const double> gradient, std::span<double> params, double lr) {
  if (gradient.size() != params.size() || state.m.size() != params.size())
    throw DimensionError("adam_step: gradient, parameter and state sizes differ");
  require_finite(gradient, "Adam gradient");
  const AdamConfig& c = state.config;
  ++state.steps;
  const double t = static_cast<double>(state.steps);
  const double correct1 = 1.0 - std::pow(c.beta1, t);
  const double correct2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = gradient[i];
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g * g;
    const double mhat = state.m[i] / correct1;
    const double vhat = state.v[i] / correct2;
    params[i] -= lr * mhat / (std::sqrt(vhat) + c.epsilon);
  }
}

}  // namespace pinndarts
