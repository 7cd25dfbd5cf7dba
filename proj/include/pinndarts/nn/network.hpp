#pragma once

#include <Eigen/Core>

#include "pinndarts/aligned.hpp"
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pinndarts/autodiff/jet.hpp"

namespace pinndarts {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;
using Vector = Eigen::VectorXd;

// Row-major list of coordinate rows.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return size() == 0; }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  void push_back(std::span<const double> point);
  void append(const PointSet& other);
  const std::vector<double>& coords() const { return coords_; }

  // Columns are points: dim x count matrix of the range [first, first+count).
  Matrix columns(std::size_t first, std::size_t count) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

// Selects which parameter groups a reverse sweep must produce. Skipping the
// weight group avoids the weight-gradient products when only architecture
// gradients are wanted.
struct GradientScope {
  bool weights = true;
  bool architecture = true;

  static GradientScope all() { return {true, true}; }
  static GradientScope weights_only() { return {true, false}; }
  static GradientScope architecture_only() { return {false, true}; }
};

// Per-chunk forward state retained for the reverse sweep.
class ChunkCache {
 public:
  virtual ~ChunkCache() = default;
};

// A scalar-output network that propagates second-order Taylor components of
// its input coordinates and back-propagates adjoints of those components to
// its flat parameter vector.
//
// Component layout for a chunk of B points follows DerivativeRequest: the
// columns [c*B, (c+1)*B) of every activation matrix hold component c.
// Instances are immutable during forward/backward and may be shared across
// threads, each thread owning its own cache.
class DifferentiableNetwork {
 public:
  virtual ~DifferentiableNetwork() = default;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t parameter_count() const = 0;
  virtual std::span<const double> parameters() const = 0;
  virtual std::span<double> mutable_parameters() = 0;

  virtual std::unique_ptr<ChunkCache> make_cache() const = 0;

  // x: input_dim x B. out: 1 x (components*B).
  virtual void forward(const Matrix& x, const DerivativeRequest& request, ChunkCache& cache,
                       RowVector& out) const = 0;

  // Accumulates into grad (length parameter_count) the gradient of
  // sum(out_adjoint .* out) for the chunk last run through `cache`.
  virtual void backward(ChunkCache& cache, const RowVector& out_adjoint, std::span<double> grad,
                        GradientScope scope) const = 0;
};

}  // namespace pinndarts
