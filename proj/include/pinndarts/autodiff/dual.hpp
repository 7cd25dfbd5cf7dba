#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace pinndarts {

// First-order forward-mode number carrying N tangent directions.
template <std::size_t N>
struct Dual {
  double v = 0.0;
  std::array<double, N> g{};

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT: implicit constant

  static constexpr Dual seed(double value, std::size_t direction) {
    Dual r(value);
    r.g[direction] = 1.0;
    return r;
  }
};

template <std::size_t N>
constexpr Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v + b.v);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = a.g[i] + b.g[i];
  return r;
}
template <std::size_t N>
constexpr Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v - b.v);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = a.g[i] - b.g[i];
  return r;
}
template <std::size_t N>
constexpr Dual<N> operator-(const Dual<N>& a) {
  Dual<N> r(-a.v);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = -a.g[i];
  return r;
}
template <std::size_t N>
constexpr Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v * b.v);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
  return r;
}
template <std::size_t N>
constexpr Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  const double inv = 1.0 / b.v;
  Dual<N> r(a.v * inv);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) * inv;
  return r;
}

template <std::size_t N>
Dual<N> sin(const Dual<N>& a) {
  Dual<N> r(std::sin(a.v));
  const double c = std::cos(a.v);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = c * a.g[i];
  return r;
}
template <std::size_t N>
Dual<N> cos(const Dual<N>& a) {
  Dual<N> r(std::cos(a.v));
  const double s = -std::sin(a.v);
  for (std::size_t i = 0; i < N; ++i) r.g[i] = s * a.g[i];
  return r;
}
template <std::size_t N>
Dual<N> exp(const Dual<N>& a) {
  Dual<N> r(std::exp(a.v));
  for (std::size_t i = 0; i < N; ++i) r.g[i] = r.v * a.g[i];
  return r;
}

}  // namespace pinndarts
