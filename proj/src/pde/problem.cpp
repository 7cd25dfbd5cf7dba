#include "pinndarts/pde/problem.hpp"

#include <stdexcept>

#include "pinndarts/autodiff/taylor.hpp"
#include "pinndarts/error.hpp"

namespace pinndarts {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::poisson:
      return "poisson";
    case ProblemKind::heat:
      return "heat";
    case ProblemKind::wave:
      return "wave";
    case ProblemKind::burgers:
      return "burgers";
  }
  return "?";
}

std::string_view to_string(Variant variant) { return variant == Variant::simple ? "simple" : "complex"; }

ProblemKind parse_problem_kind(std::string_view name) {
  for (ProblemKind k : {ProblemKind::poisson, ProblemKind::heat, ProblemKind::wave, ProblemKind::burgers})
    if (name == to_string(k)) return k;
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

Variant parse_variant(std::string_view name) {
  if (name == "simple") return Variant::simple;
  if (name == "complex") return Variant::complex;
  throw ConfigError("unknown variant '" + std::string(name) + "' (expected simple or complex)");
}

PdeProblem PdeProblem::poisson(Variant variant) { return {ProblemKind::poisson, variant, {{0, 0}, {1, 1}}}; }
PdeProblem PdeProblem::heat(Variant variant) { return {ProblemKind::heat, variant, {{-1, 0}, {1, 1}}}; }
PdeProblem PdeProblem::wave(Variant variant) { return {ProblemKind::wave, variant, {{0, 0}, {1, 1}}}; }
PdeProblem PdeProblem::burgers() { return {ProblemKind::burgers, Variant::simple, {{-1, 0}, {1, 1}}}; }

PdeProblem PdeProblem::make(ProblemKind kind, Variant variant) {
  switch (kind) {
    case ProblemKind::poisson:
      return poisson(variant);
    case ProblemKind::heat:
      return heat(variant);
    case ProblemKind::wave:
      return wave(variant);
    case ProblemKind::burgers:
      break;
  }
  return burgers();
}

std::string PdeProblem::name() const {
  if (kind_ == ProblemKind::burgers) return "burgers";
  return std::string(to_string(kind_)) + "-" + std::string(to_string(variant_));
}

DerivativeRequest PdeProblem::residual_request() const {
  DerivativeRequest r;
  switch (kind_) {
    case ProblemKind::poisson:
      r.require(0, 2).require(1, 2);
      break;
    case ProblemKind::heat:
    case ProblemKind::burgers:
      r.require(0, 2).require(1, 1);
      break;
    case ProblemKind::wave:
      r.require(0, 2).require(1, 2);
      break;
  }
  return r;
}

double PdeProblem::forcing(std::span<const double> p) const {
  const double k = frequency();
  const double x = p[0], y = p[1];
  switch (kind_) {
    case ProblemKind::poisson:
      return 2.0 * k * k * kPi * kPi * std::cos(k * kPi * x) * std::cos(k * kPi * y);
    case ProblemKind::heat:
      return (k * k * kPi * kPi - 1.0) * std::exp(-y) * std::sin(k * kPi * x);
    case ProblemKind::wave:
      // u_tt - u_xx = -k^2 x^2 sin(kxt) + k^2 t^2 sin(kxt)
      return k * k * (y * y - x * x) * std::sin(k * x * y);
    case ProblemKind::burgers:
      break;
  }
  return 0.0;
}

double PdeProblem::boundary_target(std::span<const double> p) const {
  if (kind_ == ProblemKind::burgers) return 0.0;
  return exact(p);
}

double PdeProblem::initial_target(std::span<const double> p) const {
  if (kind_ == ProblemKind::burgers) return -std::sin(kPi * p[0]);
  return exact(p);
}

double PdeProblem::velocity_target(std::span<const double> p) const {
  if (kind_ != ProblemKind::wave) throw std::logic_error(name() + " has no velocity condition");
  return frequency() * p[0] * std::cos(frequency() * p[0] * p[1]);
}

double PdeProblem::exact(std::span<const double> p) const {
  if (!has_exact_solution()) throw std::logic_error(name() + " has no closed-form solution");
  return solution(p[0], p[1]);
}

Jet<double> PdeProblem::exact_jet(std::span<const double> p, const DerivativeRequest& request) const {
  Jet<double> j;
  j.u = exact(p);
  for (std::size_t c = 0; c < 2; ++c) {
    if (request.order(c) == 0) continue;
    const Taylor2 x = c == 0 ? Taylor2::variable(p[0]) : Taylor2(p[0]);
    const Taylor2 y = c == 1 ? Taylor2::variable(p[1]) : Taylor2(p[1]);
    const Taylor2 u = solution(x, y);
    j.d1[c] = u.d;
    if (request.order(c) == 2) j.d2[c] = u.dd;
  }
  return j;
}

}  // namespace pinndarts
