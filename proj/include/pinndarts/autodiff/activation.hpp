#pragma once

#include <cmath>
#include <string>
#include <string_view>

namespace pinndarts {

// Elementwise activations with closed-form derivatives up to third order.
// The third derivative is needed by the reverse sweep through second-order
// input derivatives. `identity` and `quadratic` exist for exactness tests.
enum class Activation { tanh, swish, identity, quadratic };

struct ActivationValues {
  double f;
  double d1;
  double d2;
  double d3;
};

inline ActivationValues activate(Activation kind, double z) {
  switch (kind) {
    case Activation::tanh: {
      const double t = std::tanh(z);
      const double s = 1.0 - t * t;
      return {t, s, -2.0 * t * s, s * (6.0 * t * t - 2.0)};
    }
    case Activation::swish: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      const double q = s * (1.0 - s);
      return {z * s, s + z * q, 2.0 * q + z * q * (1.0 - 2.0 * s),
              3.0 * q * (1.0 - 2.0 * s) + z * q * (1.0 - 6.0 * s + 6.0 * s * s)};
    }
    case Activation::identity:
      return {z, 1.0, 0.0, 0.0};
    case Activation::quadratic:
      return {z * z, 2.0 * z, 2.0, 0.0};
  }
  return {0.0, 0.0, 0.0, 0.0};
}

std::string_view to_string(Activation kind);
Activation parse_activation(std::string_view name);

}  // namespace pinndarts
