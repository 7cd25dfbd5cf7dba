#pragma once

// Test-only oracles: finite differences and random instance generators.

#include <cmath>
#include <functional>
#include <vector>

#include "pinndarts/nn/fnn.hpp"
#include "pinndarts/random.hpp"

namespace testing {

inline pinndarts::Fnn random_fnn(std::size_t input_dim, std::vector<std::size_t> widths,
                                 pinndarts::Activation act, std::uint64_t seed, double scale = 0.8) {
  pinndarts::Fnn net(input_dim, std::move(widths), act);
  pinndarts::Rng rng(seed, "test-fnn");
  for (double& p : net.mutable_parameters()) p = rng.uniform(-scale, scale);
  return net;
}

inline pinndarts::PointSet random_points(std::size_t dim, std::size_t n, std::uint64_t seed, double lo = -1.0,
                                         double hi = 1.0) {
  pinndarts::Rng rng(seed, "test-points");
  pinndarts::PointSet pts(dim);
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& c : p) c = rng.uniform(lo, hi);
    pts.push_back(p);
  }
  return pts;
}

// Central differences of f over every entry of `params` (restored after).
inline std::vector<double> fd_gradient(const std::function<double()>& f, std::span<double> params,
                                       double step = 1e-4) {
  std::vector<double> g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + step;
    const double fp = f();
    params[i] = saved - step;
    const double fm = f();
    params[i] = saved;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

inline double relative_error(double value, double oracle) {
  return std::abs(value - oracle) / (std::abs(oracle) + 1e-12);
}

inline double max_relative_error(std::span<const double> values, std::span<const double> oracle) {
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) worst = std::max(worst, relative_error(values[i], oracle[i]));
  return worst;
}

}  // namespace testing
