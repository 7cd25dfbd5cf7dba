#pragma once

#include <span>

#include "pinndarts/autodiff/tape.hpp"
#include "pinndarts/nn/batch.hpp"
#include "pinndarts/pde/problem.hpp"
#include "pinndarts/sampling/samples.hpp"

namespace pinndarts {

struct LossWeights {
  double pde = 1.0;
  double bc = 1.0;
  double ic = 1.0;  // applies to both the position and the velocity condition
};

// Mean squared residual / mismatch per term and their weighted total
//   total = w.pde * pde + w.bc * bc + w.ic * (ic + ic_velocity).
// ic and ic_velocity are zero for problems without those conditions.
struct LossBreakdown {
  double pde = 0.0;
  double bc = 0.0;
  double ic = 0.0;
  double ic_velocity = 0.0;
  LossWeights weights;
  double total = 0.0;
};

// Loss value only. Throws ConfigError when a point set the problem needs is empty.
LossBreakdown pinn_loss(const DifferentiableNetwork& net, const PdeProblem& problem, const SampleSet& samples,
                        const LossWeights& weights = {}, Execution execution = Execution::parallel);

// Loss value plus its parameter gradient, added into `grad`.
LossBreakdown pinn_loss_gradient(const DifferentiableNetwork& net, const PdeProblem& problem,
                                 const SampleSet& samples, const LossWeights& weights, std::span<double> grad,
                                 GradientScope scope, Execution execution = Execution::parallel);

// The same loss recorded on a tape, for composite objectives and verification.
struct TapeLoss {
  Var pde, bc, ic, ic_velocity, total;
};
TapeLoss pinn_loss_tape(Tape& tape, const DifferentiableNetwork& net, const PdeProblem& problem,
                        const SampleSet& samples, const LossWeights& weights = {});

}  // namespace pinndarts
