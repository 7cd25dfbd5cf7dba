#include "pinndarts/nn/batch.hpp"

#include <cmath>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pinndarts/error.hpp"
#include "pinndarts/nn/taylor_layer.hpp"

namespace pinndarts {

namespace {

std::size_t chunk_count(std::size_t n) { return (n + kChunkPoints - 1) / kChunkPoints; }

void check_input(const DifferentiableNetwork& net, const PointSet& points, const DerivativeRequest& request) {
  if (!points.empty() && points.dim() != net.input_dim())
    throw DimensionError("network input dimension " + std::to_string(net.input_dim()) +
                         " does not match point dimension " + std::to_string(points.dim()));
  for (std::size_t k = net.input_dim(); k < kMaxInputs; ++k)
    if (request.order(k) != 0) throw DimensionError("derivative requested for a missing coordinate");
}

Jet<double> extract(const TaylorLayout& layout, const RowVector& out, std::size_t j) {
  Jet<double> jet;
  const auto b = layout.batch;
  jet.u = out(static_cast<Eigen::Index>(j));
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    if (layout.first[k] >= 0) jet.d1[k] = out(static_cast<Eigen::Index>(layout.first[k] * b + j));
    if (layout.second[k] >= 0) jet.d2[k] = out(static_cast<Eigen::Index>(layout.second[k] * b + j));
  }
  return jet;
}

void scatter(const TaylorLayout& layout, const Jet<double>& adj, std::size_t j, RowVector& out_adj) {
  const auto b = layout.batch;
  out_adj(static_cast<Eigen::Index>(j)) = adj.u;
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    if (layout.first[k] >= 0) out_adj(static_cast<Eigen::Index>(layout.first[k] * b + j)) = adj.d1[k];
    if (layout.second[k] >= 0) out_adj(static_cast<Eigen::Index>(layout.second[k] * b + j)) = adj.d2[k];
  }
}

bool finite(const Jet<double>& j) {
  if (!std::isfinite(j.u)) return false;
  for (std::size_t k = 0; k < kMaxInputs; ++k)
    if (!std::isfinite(j.d1[k]) || !std::isfinite(j.d2[k])) return false;
  return true;
}

}  // namespace

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values)
    if (!std::isfinite(v)) throw NumericalError(std::string("non-finite value in ") + what);
}

std::vector<Jet<double>> evaluate_batch(const DifferentiableNetwork& net, const PointSet& points,
                                        const DerivativeRequest& request, Execution execution) {
  check_input(net, points, request);
  const std::size_t n = points.size();
  const std::size_t chunks = chunk_count(n);
  std::vector<Jet<double>> result(n);
  bool bad = false;

#pragma omp parallel if (execution == Execution::parallel) reduction(|| : bad)
  {
    auto cache = net.make_cache();
    RowVector out;
#pragma omp for schedule(static)
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t first = c * kChunkPoints;
      const std::size_t count = std::min(kChunkPoints, n - first);
      const Matrix x = points.columns(first, count);
      const TaylorLayout layout(request, count);
      out.resize(static_cast<Eigen::Index>(layout.columns()));
      net.forward(x, request, *cache, out);
      for (std::size_t j = 0; j < count; ++j) {
        result[first + j] = extract(layout, out, j);
        bad = bad || !finite(result[first + j]);
      }
    }
  }
  if (bad) throw NumericalError("non-finite network output");
  return result;
}

double accumulate_point_losses(const DifferentiableNetwork& net, const PointSet& points,
                               const DerivativeRequest& request, const PointLoss& loss,
                               std::span<double> grad, GradientScope scope, Execution execution) {
  check_input(net, points, request);
  if (grad.size() != net.parameter_count()) throw DimensionError("gradient buffer size mismatch");
  const std::size_t n = points.size();
  const std::size_t chunks = chunk_count(n);
  std::vector<double> chunk_loss(chunks, 0.0);
  int threads = 1;
#ifdef _OPENMP
  if (execution == Execution::parallel) threads = omp_get_max_threads();
#endif
  std::vector<AlignedVector> buffers(static_cast<std::size_t>(threads));
  bool bad = false;

#pragma omp parallel num_threads(threads) if (execution == Execution::parallel) reduction(|| : bad)
  {
    int tid = 0;
#ifdef _OPENMP
    tid = omp_get_thread_num();
#endif
    auto& buffer = buffers[static_cast<std::size_t>(tid)];
    buffer.assign(grad.size(), 0.0);
    auto cache = net.make_cache();
    RowVector out;
    RowVector out_adj;
#pragma omp for schedule(static)
    for (std::size_t c = 0; c < chunks; ++c) {
      const std::size_t first = c * kChunkPoints;
      const std::size_t count = std::min(kChunkPoints, n - first);
      const Matrix x = points.columns(first, count);
      const TaylorLayout layout(request, count);
      out.resize(static_cast<Eigen::Index>(layout.columns()));
      out_adj.setZero(static_cast<Eigen::Index>(layout.columns()));
      net.forward(x, request, *cache, out);
      double sum = 0.0;
      for (std::size_t j = 0; j < count; ++j) {
        const Jet<double> jet = extract(layout, out, j);
        Jet<double> adj;
        sum += loss(first + j, jet, adj);
        scatter(layout, adj, j, out_adj);
      }
      chunk_loss[c] = sum;
      bad = bad || !std::isfinite(sum);
      net.backward(*cache, out_adj, buffer, scope);
    }
  }
  if (bad) throw NumericalError("non-finite loss contribution");
  for (const auto& buffer : buffers)
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += buffer[i];
  require_finite(grad, "parameter gradient");
  double total = 0.0;
  for (double v : chunk_loss) total += v;
  return total;
}

}  // namespace pinndarts
