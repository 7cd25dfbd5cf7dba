#pragma once

#include <cmath>

namespace pinndarts {

// Truncated second-order Taylor number along a single input direction:
// value, first and second derivative. Arithmetic propagates all three
// exactly, so evaluating f on seed(x) yields f, f', f''.
struct Taylor2 {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  constexpr Taylor2() = default;
  constexpr Taylor2(double value) : v(value) {}  // NOLINT: implicit constant
  constexpr Taylor2(double value, double first, double second)
      : v(value), d(first), dd(second) {}

  static constexpr Taylor2 variable(double value) { return {value, 1.0, 0.0}; }
};

// Applies a scalar function with known f, f', f'' at a.v.
constexpr Taylor2 chain(const Taylor2& a, double f, double f1, double f2) {
  return {f, f1 * a.d, f2 * a.d * a.d + f1 * a.dd};
}

constexpr Taylor2 operator+(const Taylor2& a, const Taylor2& b) {
  return {a.v + b.v, a.d + b.d, a.dd + b.dd};
}
constexpr Taylor2 operator-(const Taylor2& a, const Taylor2& b) {
  return {a.v - b.v, a.d - b.d, a.dd - b.dd};
}
constexpr Taylor2 operator-(const Taylor2& a) { return {-a.v, -a.d, -a.dd}; }
constexpr Taylor2 operator*(const Taylor2& a, const Taylor2& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2.0 * a.d * b.d + a.v * b.dd};
}
constexpr Taylor2 operator/(const Taylor2& a, const Taylor2& b) {
  const double inv = 1.0 / b.v;
  const Taylor2 r{inv, -inv * inv * b.d, 2.0 * inv * inv * inv * b.d * b.d - inv * inv * b.dd};
  return a * r;
}

inline Taylor2 sin(const Taylor2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, s, c, -s);
}
inline Taylor2 cos(const Taylor2& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return chain(a, c, -s, -c);
}
inline Taylor2 exp(const Taylor2& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Taylor2 tanh(const Taylor2& a) {
  const double t = std::tanh(a.v), s = 1.0 - t * t;
  return chain(a, t, s, -2.0 * t * s);
}

}  // namespace pinndarts
