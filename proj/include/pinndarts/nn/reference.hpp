#pragma once

#include <span>

#include "pinndarts/autodiff/tape.hpp"
#include "pinndarts/nn/fnn.hpp"

// Serial per-point evaluation of an Fnn written with scalar loops and generic
// Taylor arithmetic. Kept as the reference the batched kernels are tested
// and benchmarked against.
namespace pinndarts::reference {

Jet<double> fnn_jet(const Fnn& net, std::span<const double> point, const DerivativeRequest& request);

// Same computation recorded on the tape that owns `parameters` (one Var per
// network parameter, canonical order). Reverse mode through this graph is an
// independent route to the parameter gradient.
Jet<Var> fnn_jet(std::span<const Var> parameters, const Fnn& net, std::span<const double> point,
                 const DerivativeRequest& request);

}  // namespace pinndarts::reference
