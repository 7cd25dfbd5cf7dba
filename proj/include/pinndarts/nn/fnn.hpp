#pragma once

#include <cstdint>
#include <vector>

#include "pinndarts/autodiff/activation.hpp"
#include "pinndarts/nn/network.hpp"
#include "pinndarts/nn/taylor_layer.hpp"

namespace pinndarts {

// Plain feedforward network: coordinates -> hidden layers h = s(W h + b) ->
// linear scalar output. `hidden_widths` lists every hidden layer, the first
// being the input layer's width.
//
// Parameters are stored flat, layer by layer, each as the column-major weight
// matrix (out x in) followed by the bias.
class Fnn final : public DifferentiableNetwork {
 public:
  Fnn(std::size_t input_dim, std::vector<std::size_t> hidden_widths, Activation activation);

  // Glorot-uniform weights and zero biases drawn from `seed`.
  static Fnn initialized(std::size_t input_dim, std::vector<std::size_t> hidden_widths,
                         Activation activation, std::uint64_t seed);

  std::size_t input_dim() const override { return input_dim_; }
  std::size_t parameter_count() const override { return params_.size(); }
  std::span<const double> parameters() const override { return params_; }
  std::span<double> mutable_parameters() override { return params_; }

  Activation activation() const { return activation_; }
  const std::vector<std::size_t>& hidden_widths() const { return widths_; }

  // Affine layers including the output layer.
  std::size_t layer_count() const { return widths_.size() + 1; }
  std::size_t layer_rows(std::size_t layer) const;
  std::size_t layer_cols(std::size_t layer) const;
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const;

  ConstMatrixMap weight(std::size_t layer) const;
  MatrixMap weight(std::size_t layer);
  ConstVectorMap bias(std::size_t layer) const;
  VectorMap bias(std::size_t layer);

  // Plain forward pass (no derivative components), chunked like the kernels.
  std::vector<double> predict(const PointSet& points) const;

  std::unique_ptr<ChunkCache> make_cache() const override;
  void forward(const Matrix& x, const DerivativeRequest& request, ChunkCache& cache,
               RowVector& out) const override;
  void backward(ChunkCache& cache, const RowVector& out_adjoint, std::span<double> grad,
                GradientScope scope) const override;

 private:
  std::size_t input_dim_;
  std::vector<std::size_t> widths_;
  Activation activation_;
  std::vector<std::size_t> offsets_;
  AlignedVector params_;
};

}  // namespace pinndarts
