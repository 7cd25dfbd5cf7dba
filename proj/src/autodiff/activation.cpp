#include "pinndarts/autodiff/activation.hpp"

#include "pinndarts/error.hpp"

namespace pinndarts {

std::string_view to_string(Activation kind) {
  switch (kind) {
    case Activation::tanh: return "tanh";
    case Activation::swish: return "swish";
    case Activation::identity: return "identity";
    case Activation::quadratic: return "quadratic";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "swish") return Activation::swish;
  if (name == "identity") return Activation::identity;
  if (name == "quadratic") return Activation::quadratic;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

}  // namespace pinndarts
