#pragma once

#include <functional>
#include <vector>

#include "pinndarts/nn/network.hpp"

namespace pinndarts {

// Points are processed in fixed chunks of this many columns per component.
inline constexpr std::size_t kChunkPoints = 64;

enum class Execution { serial, parallel };

// u and the requested partials at every point. Chunks run in parallel under
// Execution::parallel; each point's result is independent of the others.
std::vector<Jet<double>> evaluate_batch(const DifferentiableNetwork& net, const PointSet& points,
                                        const DerivativeRequest& request,
                                        Execution execution = Execution::parallel);

// Per-point loss: returns the point's contribution and writes its partials
// with respect to the jet entries into `adjoint` (zero-initialized).
using PointLoss = std::function<double(std::size_t index, const Jet<double>& jet, Jet<double>& adjoint)>;

// Fused forward/reverse pass for losses that are sums of per-point terms.
// Adds the parameter gradient into `grad` and returns the summed loss.
//
// Reduction order: contributions are summed point by point inside a chunk and
// chunk totals are then summed in chunk order, so the loss value does not
// depend on the thread count. Gradients are accumulated per thread and the
// thread buffers summed in thread order; single-threaded runs are therefore
// bit-reproducible.
double accumulate_point_losses(const DifferentiableNetwork& net, const PointSet& points,
                               const DerivativeRequest& request, const PointLoss& loss,
                               std::span<double> grad, GradientScope scope,
                               Execution execution = Execution::parallel);

// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

}  // namespace pinndarts
