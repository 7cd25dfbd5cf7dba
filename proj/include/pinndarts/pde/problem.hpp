#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "pinndarts/autodiff/jet.hpp"

namespace pinndarts {

enum class ProblemKind { poisson, heat, wave, burgers };
enum class Variant { simple, complex };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(Variant variant);
ProblemKind parse_problem_kind(std::string_view name);
Variant parse_variant(std::string_view name);

// Axis-aligned box; coordinate 0 is x, coordinate 1 is y (Poisson) or t.
struct Box {
  std::array<double, 2> lo;
  std::array<double, 2> hi;
};

// One benchmark problem. Manufactured solutions use the frequency k = 1
// (simple) or k = 2 (complex):
//
//   poisson  -(u_xx + u_yy) = g   u = cos(k pi x) cos(k pi y)    on [0,1]^2
//   heat     u_t - u_xx = g       u = exp(-t) sin(k pi x)        on [-1,1]x[0,1]
//   wave     u_tt - u_xx = g      u = sin(k x t)                 on [0,1]^2
//   burgers  u_t + u u_x - nu u_xx = 0, u(x,0) = -sin(pi x), u(+-1,t) = 0
//
// Burgers has no closed-form solution; its reference comes from the
// spectral solver.
class PdeProblem {
 public:
  static PdeProblem poisson(Variant variant);
  static PdeProblem heat(Variant variant);
  static PdeProblem wave(Variant variant);
  static PdeProblem burgers();
  static PdeProblem make(ProblemKind kind, Variant variant);

  static constexpr double kBurgersViscosity = 0.01 / std::numbers::pi;

  ProblemKind kind() const { return kind_; }
  Variant variant() const { return variant_; }
  // e.g. "poisson-simple", "burgers"
  std::string name() const;
  const Box& domain() const { return domain_; }
  bool time_dependent() const { return kind_ != ProblemKind::poisson; }
  bool has_velocity_condition() const { return kind_ == ProblemKind::wave; }
  bool has_exact_solution() const { return kind_ != ProblemKind::burgers; }
  double frequency() const { return variant_ == Variant::simple ? 1.0 : 2.0; }

  // Partials the residual reads.
  DerivativeRequest residual_request() const;

  double forcing(std::span<const double> p) const;
  // Dirichlet data on the spatial boundary, u0 on t = 0, u1 = u_t on t = 0.
  double boundary_target(std::span<const double> p) const;
  double initial_target(std::span<const double> p) const;
  double velocity_target(std::span<const double> p) const;

  // Throws std::logic_error for Burgers.
  double exact(std::span<const double> p) const;
  // u and its diagonal partials from the closed form through Taylor arithmetic.
  Jet<double> exact_jet(std::span<const double> p, const DerivativeRequest& request) const;

  // Residual on a derivative table; T is double, a dual number or a tape Var.
  template <class T>
  T residual(std::span<const double> p, const Jet<T>& j) const {
    switch (kind_) {
      case ProblemKind::poisson:
        return -(j.d2[0] + j.d2[1]) - T(forcing(p));
      case ProblemKind::heat:
        return j.d1[1] - j.d2[0] - T(forcing(p));
      case ProblemKind::wave:
        return j.d2[1] - j.d2[0] - T(forcing(p));
      case ProblemKind::burgers:
        break;
    }
    return j.d1[1] + j.u * j.d1[0] - T(kBurgersViscosity) * j.d2[0];
  }

  // Closed-form solution on any scalar type supporting sin, cos and exp.
  template <class T>
  T solution(const T& x, const T& y) const {
    using std::cos, std::exp, std::sin;
    const double k = frequency();
    const double kpi = k * std::numbers::pi;
    switch (kind_) {
      case ProblemKind::poisson:
        return cos(T(kpi) * x) * cos(T(kpi) * y);
      case ProblemKind::heat:
        return exp(-y) * sin(T(kpi) * x);
      case ProblemKind::wave:
        return sin(T(k) * x * y);
      case ProblemKind::burgers:
        break;
    }
    return T(0.0);
  }

 private:
  PdeProblem(ProblemKind kind, Variant variant, Box domain) : kind_(kind), variant_(variant), domain_(domain) {}

  ProblemKind kind_;
  Variant variant_;
  Box domain_;
};

}  // namespace pinndarts
