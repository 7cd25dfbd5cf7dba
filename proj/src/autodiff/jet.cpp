#include "pinndarts/autodiff/jet.hpp"

#include <algorithm>

#include "pinndarts/error.hpp"

namespace pinndarts {

DerivativeRequest& DerivativeRequest::require(std::size_t coordinate, int order) {
  if (coordinate >= kMaxInputs) throw DimensionError("derivative request: coordinate out of range");
  if (order < 0 || order > 2) throw ConfigError("derivative request: order must be 0, 1 or 2");
  order_[coordinate] = static_cast<std::uint8_t>(std::max<int>(order_[coordinate], order));
  return *this;
}

int DerivativeRequest::max_order() const {
  return *std::max_element(order_.begin(), order_.end());
}

std::size_t DerivativeRequest::component_count() const {
  std::size_t n = 1;
  for (auto o : order_) n += (o >= 1) + (o == 2);
  return n;
}

int DerivativeRequest::first_component(std::size_t coordinate) const {
  if (order_[coordinate] < 1) return -1;
  int index = 1;
  for (std::size_t k = 0; k < coordinate; ++k) index += order_[k] >= 1;
  return index;
}

int DerivativeRequest::second_component(std::size_t coordinate) const {
  if (order_[coordinate] < 2) return -1;
  int index = 1;
  for (auto o : order_) index += o >= 1;
  for (std::size_t k = 0; k < coordinate; ++k) index += order_[k] == 2;
  return index;
}

DerivativeRequest DerivativeRequest::merged(const DerivativeRequest& other) const {
  DerivativeRequest r = *this;
  for (std::size_t k = 0; k < kMaxInputs; ++k) r.require(k, other.order_[k]);
  return r;
}

}  // namespace pinndarts
