#include "pinndarts/loss/pinn_loss.hpp"

#include "pinndarts/autodiff/dual.hpp"
#include "pinndarts/error.hpp"

namespace pinndarts {

namespace {

using ResidualDual = Dual<1 + 2 * kMaxInputs>;

void require_points(const PdeProblem& problem, const SampleSet& samples) {
  if (samples.interior.empty()) throw ConfigError(problem.name() + ": no interior points");
  if (samples.boundary.empty()) throw ConfigError(problem.name() + ": no boundary points");
  if (problem.time_dependent() && samples.initial.empty())
    throw ConfigError(problem.name() + ": no initial points");
}

DerivativeRequest velocity_request() {
  DerivativeRequest r;
  r.require(1, 1);
  return r;
}

// Squared residual at one point; adjoint = scale * d(r^2)/d(jet).
double residual_term(const PdeProblem& problem, std::span<const double> p, const Jet<double>& j, double scale,
                     Jet<double>& adjoint) {
  Jet<ResidualDual> d;
  d.u = ResidualDual::seed(j.u, 0);
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    d.d1[k] = ResidualDual::seed(j.d1[k], 1 + k);
    d.d2[k] = ResidualDual::seed(j.d2[k], 1 + kMaxInputs + k);
  }
  const ResidualDual r = problem.residual(p, d);
  const double s = 2.0 * r.v * scale;
  adjoint.u = s * r.g[0];
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    adjoint.d1[k] = s * r.g[1 + k];
    adjoint.d2[k] = s * r.g[1 + kMaxInputs + k];
  }
  return r.v * r.v;
}

double mean(double sum, std::size_t n) { return sum / static_cast<double>(n); }

void finish(LossBreakdown& b) {
  b.total = b.weights.pde * b.pde + b.weights.bc * b.bc + b.weights.ic * (b.ic + b.ic_velocity);
  if (!std::isfinite(b.total)) throw NumericalError("non-finite PINN loss");
}

}  // namespace

LossBreakdown pinn_loss(const DifferentiableNetwork& net, const PdeProblem& problem, const SampleSet& samples,
                        const LossWeights& weights, Execution execution) {
  require_points(problem, samples);
  LossBreakdown b;
  b.weights = weights;

  const auto interior = evaluate_batch(net, samples.interior, problem.residual_request(), execution);
  double sum = 0.0;
  for (std::size_t i = 0; i < interior.size(); ++i) {
    const double r = problem.residual(samples.interior[i], interior[i]);
    sum += r * r;
  }
  b.pde = mean(sum, interior.size());

  const auto boundary = evaluate_batch(net, samples.boundary, DerivativeRequest::value_only(), execution);
  sum = 0.0;
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const double e = boundary[i].u - problem.boundary_target(samples.boundary[i]);
    sum += e * e;
  }
  b.bc = mean(sum, boundary.size());

  if (problem.time_dependent()) {
    const auto request =
        problem.has_velocity_condition() ? velocity_request() : DerivativeRequest::value_only();
    const auto initial = evaluate_batch(net, samples.initial, request, execution);
    double pos = 0.0, vel = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      const double e = initial[i].u - problem.initial_target(samples.initial[i]);
      pos += e * e;
      if (problem.has_velocity_condition()) {
        const double v = initial[i].d1[1] - problem.velocity_target(samples.initial[i]);
        vel += v * v;
      }
    }
    b.ic = mean(pos, initial.size());
    b.ic_velocity = mean(vel, initial.size());
  }
  finish(b);
  return b;
}

LossBreakdown pinn_loss_gradient(const DifferentiableNetwork& net, const PdeProblem& problem,
                                 const SampleSet& samples, const LossWeights& weights, std::span<double> grad,
                                 GradientScope scope, Execution execution) {
  require_points(problem, samples);
  LossBreakdown b;
  b.weights = weights;

  const double pde_scale = weights.pde / static_cast<double>(samples.interior.size());
  b.pde = mean(accumulate_point_losses(
                   net, samples.interior, problem.residual_request(),
                   [&](std::size_t i, const Jet<double>& j, Jet<double>& adj) {
                     return residual_term(problem, samples.interior[i], j, pde_scale, adj);
                   },
                   grad, scope, execution),
               samples.interior.size());

  const double bc_scale = weights.bc / static_cast<double>(samples.boundary.size());
  b.bc = mean(accumulate_point_losses(
                  net, samples.boundary, DerivativeRequest::value_only(),
                  [&](std::size_t i, const Jet<double>& j, Jet<double>& adj) {
                    const double e = j.u - problem.boundary_target(samples.boundary[i]);
                    adj.u = 2.0 * e * bc_scale;
                    return e * e;
                  },
                  grad, scope, execution),
              samples.boundary.size());

  if (problem.time_dependent()) {
    const double ic_scale = weights.ic / static_cast<double>(samples.initial.size());
    b.ic = mean(accumulate_point_losses(
                    net, samples.initial, DerivativeRequest::value_only(),
                    [&](std::size_t i, const Jet<double>& j, Jet<double>& adj) {
                      const double e = j.u - problem.initial_target(samples.initial[i]);
                      adj.u = 2.0 * e * ic_scale;
                      return e * e;
                    },
                    grad, scope, execution),
                samples.initial.size());
    if (problem.has_velocity_condition()) {
      b.ic_velocity = mean(accumulate_point_losses(
                               net, samples.initial, velocity_request(),
                               [&](std::size_t i, const Jet<double>& j, Jet<double>& adj) {
                                 const double e = j.d1[1] - problem.velocity_target(samples.initial[i]);
                                 adj.d1[1] = 2.0 * e * ic_scale;
                                 return e * e;
                               },
                               grad, scope, execution),
                           samples.initial.size());
    }
  }
  finish(b);
  return b;
}

TapeLoss pinn_loss_tape(Tape& tape, const DifferentiableNetwork& net, const PdeProblem& problem,
                        const SampleSet& samples, const LossWeights& weights) {
  require_points(problem, samples);
  TapeLoss l;
  auto mean_of = [](const Var& sum, std::size_t n) { return sum / Var(static_cast<double>(n)); };

  const auto interior = tape.network(net, 0, samples.interior, problem.residual_request());
  Var sum = 0.0;
  for (std::size_t i = 0; i < interior.size(); ++i) sum = sum + square(problem.residual(samples.interior[i], interior[i]));
  l.pde = mean_of(sum, interior.size());

  const auto boundary = tape.network(net, 0, samples.boundary, DerivativeRequest::value_only());
  sum = 0.0;
  for (std::size_t i = 0; i < boundary.size(); ++i)
    sum = sum + square(boundary[i].u - problem.boundary_target(samples.boundary[i]));
  l.bc = mean_of(sum, boundary.size());

  l.ic = 0.0;
  l.ic_velocity = 0.0;
  if (problem.time_dependent()) {
    const auto request = problem.has_velocity_condition() ? velocity_request() : DerivativeRequest::value_only();
    const auto initial = tape.network(net, 0, samples.initial, request);
    Var pos = 0.0, vel = 0.0;
    for (std::size_t i = 0; i < initial.size(); ++i) {
      pos = pos + square(initial[i].u - problem.initial_target(samples.initial[i]));
      if (problem.has_velocity_condition())
        vel = vel + square(initial[i].d1[1] - problem.velocity_target(samples.initial[i]));
    }
    l.ic = mean_of(pos, initial.size());
    l.ic_velocity = mean_of(vel, initial.size());
  }
  l.total = weights.pde * l.pde + weights.bc * l.bc + weights.ic * (l.ic + l.ic_velocity);
  return l;
}

}  // namespace pinndarts
