#include "pinndarts/nn/reference.hpp"

#include <vector>

#include "pinndarts/error.hpp"

namespace pinndarts::reference {

namespace {

double act(Activation kind, int order, double z) {
  const ActivationValues v = activate(kind, z);
  return order == 0 ? v.f : order == 1 ? v.d1 : v.d2;
}
Var act(Activation kind, int order, const Var& z) { return activation(kind, order, z); }

// Taylor components of one hidden representation.
template <class T>
struct Rep {
  std::vector<T> v;
  std::vector<std::vector<T>> d1;  // per coordinate
  std::vector<std::vector<T>> d2;
};

template <class T, class Param>
Jet<T> propagate(const Fnn& net, Param&& param, std::span<const double> point, const DerivativeRequest& request) {
  if (point.size() != net.input_dim()) throw DimensionError("reference: point dimension mismatch");
  const std::size_t dim = net.input_dim();
  Rep<T> h;
  h.v.assign(point.begin(), point.end());
  h.d1.assign(dim, std::vector<T>(dim, T(0.0)));
  h.d2.assign(dim, std::vector<T>(dim, T(0.0)));
  for (std::size_t k = 0; k < dim; ++k) h.d1[k][k] = T(1.0);

  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const std::size_t rows = net.layer_rows(l), cols = net.layer_cols(l);
    const bool output = l + 1 == net.layer_count();
    Rep<T> next;
    next.v.resize(rows);
    next.d1.assign(dim, std::vector<T>(rows));
    next.d2.assign(dim, std::vector<T>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
      T z0 = param(net.bias_offset(l) + i);
      std::vector<T> z1(dim, T(0.0)), z2(dim, T(0.0));
      for (std::size_t j = 0; j < cols; ++j) {
        const T w = param(net.weight_offset(l) + j * rows + i);
        z0 = z0 + w * h.v[j];
        for (std::size_t k = 0; k < dim; ++k) {
          if (request.order(k) >= 1) z1[k] = z1[k] + w * h.d1[k][j];
          if (request.order(k) >= 2) z2[k] = z2[k] + w * h.d2[k][j];
        }
      }
      if (output) {
        next.v[i] = z0;
        for (std::size_t k = 0; k < dim; ++k) {
          next.d1[k][i] = z1[k];
          next.d2[k][i] = z2[k];
        }
        continue;
      }
      const T s1 = act(net.activation(), 1, z0);
      const T s2 = act(net.activation(), 2, z0);
      next.v[i] = act(net.activation(), 0, z0);
      for (std::size_t k = 0; k < dim; ++k) {
        next.d1[k][i] = s1 * z1[k];
        next.d2[k][i] = s2 * z1[k] * z1[k] + s1 * z2[k];
      }
    }
    h = std::move(next);
  }
  Jet<T> jet;
  jet.u = h.v[0];
  for (std::size_t k = 0; k < dim; ++k) {
    if (request.order(k) >= 1) jet.d1[k] = h.d1[k][0];
    if (request.order(k) >= 2) jet.d2[k] = h.d2[k][0];
  }
  return jet;
}

}  // namespace

Jet<double> fnn_jet(const Fnn& net, std::span<const double> point, const DerivativeRequest& request) {
  const auto p = net.parameters();
  return propagate<double>(net, [&](std::size_t i) { return p[i]; }, point, request);
}

Jet<Var> fnn_jet(std::span<const Var> parameters, const Fnn& net, std::span<const double> point,
                 const DerivativeRequest& request) {
  if (parameters.size() != net.parameter_count()) throw DimensionError("reference: parameter count mismatch");
  return propagate<Var>(net, [&](std::size_t i) { return parameters[i]; }, point, request);
}

}  // namespace pinndarts::reference
