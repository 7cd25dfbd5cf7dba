#pragma once

#include <vector>

#include "pinndarts/autodiff/tape.hpp"
#include "pinndarts/nn/batch.hpp"

namespace pinndarts {

// u and the requested diagonal partials at each point. Throws DimensionError
// on coordinate-count mismatch and NumericalError on non-finite output.
inline std::vector<Jet<double>> evaluate_with_derivatives(const DifferentiableNetwork& net,
                                                          const PointSet& points,
                                                          const DerivativeRequest& request) {
  return evaluate_batch(net, points, request);
}

}  // namespace pinndarts
