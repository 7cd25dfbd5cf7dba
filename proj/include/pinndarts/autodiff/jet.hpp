#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace pinndarts {

inline constexpr std::size_t kMaxInputs = 3;

// Which partials of u are wanted, per input coordinate: 0 = none,
// 1 = du/dx_k, 2 = du/dx_k and d2u/dx_k2. Mixed partials cannot be expressed.
// The value u itself is always produced.
class DerivativeRequest {
 public:
  DerivativeRequest() = default;

  static DerivativeRequest value_only() { return {}; }

  DerivativeRequest& require(std::size_t coordinate, int order);
  int order(std::size_t coordinate) const { return order_[coordinate]; }
  int max_order() const;

  // Layout of propagated Taylor components: 0 is the value, then one first
  // derivative per coordinate with order >= 1, then one second derivative per
  // coordinate with order 2, both in coordinate order.
  std::size_t component_count() const;
  // -1 when the component is not propagated.
  int first_component(std::size_t coordinate) const;
  int second_component(std::size_t coordinate) const;

  // Component union, e.g. to evaluate several loss terms in one pass.
  DerivativeRequest merged(const DerivativeRequest& other) const;

  bool operator==(const DerivativeRequest&) const = default;

 private:
  std::array<std::uint8_t, kMaxInputs> order_{};
};

// u and its diagonal partials at one point. Unrequested entries stay zero.
template <class T>
struct Jet {
  T u{};
  std::array<T, kMaxInputs> d1{};
  std::array<T, kMaxInputs> d2{};
};

}  // namespace pinndarts
