#pragma once

#include <array>
#include <cstdint>

#include "pinndarts/autodiff/activation.hpp"
#include "pinndarts/nn/fnn.hpp"
#include "pinndarts/nn/network.hpp"
#include "pinndarts/nn/taylor_layer.hpp"
#include "pinndarts/supernet/architecture.hpp"

namespace pinndarts {

struct SupernetConfig {
  std::size_t input_dim = 2;
  WidthTable widths = WidthTable::full();
  std::size_t edges = 8;
  Activation activation = Activation::tanh;
  MixtureMode mode = MixtureMode::softmax;
};

// Linear chain of edges + 1 nodes. h0 = s(W_in x + b_in) has the maximum
// width; every edge mixes the four linear candidates s(W_c h + b_c), each
// zero-padded to the maximum width, with the identity (skip) candidate:
//
//   h_e = sum_c w_c(alpha_e) pad(s(W_c h_{e-1} + b_c)) + w_skip(alpha_e) h_{e-1}
//
// and the output is a linear map of the last node.
//
// Flat parameter order: input layer (W, b); per edge the four candidates'
// weights stacked as one column-major (sum of widths) x (max width) matrix
// with candidate c in row block c, then the stacked biases; output layer
// (W, b); alpha row-major. Weights come first so [0, weight_count()) is the
// network-weight group and the tail is the architecture group.
class MixedNetwork final : public DifferentiableNetwork {
 public:
  explicit MixedNetwork(SupernetConfig config);

  // Glorot-uniform weights, zero biases, alpha = 0 (uniform mixture).
  static MixedNetwork initialized(SupernetConfig config, std::uint64_t seed);

  const SupernetConfig& config() const { return config_; }
  std::size_t input_dim() const override { return config_.input_dim; }
  std::size_t parameter_count() const override { return params_.size(); }
  std::span<const double> parameters() const override { return params_; }
  std::span<double> mutable_parameters() override { return params_; }

  std::size_t weight_count() const { return alpha_offset_; }
  std::size_t alpha_offset() const { return alpha_offset_; }
  AlphaMatrix alpha() const;
  void set_alpha(const AlphaMatrix& alpha);

  ConstMatrixMap input_weight() const;
  ConstVectorMap input_bias() const;
  // Row block of candidate c (< kSkipCandidate) on edge e.
  ConstMatrixMap edge_weight(std::size_t edge) const;
  ConstVectorMap edge_bias(std::size_t edge) const;
  MatrixMap edge_weight(std::size_t edge);
  VectorMap edge_bias(std::size_t edge);
  std::size_t candidate_row(std::size_t candidate) const { return row_offsets_[candidate]; }
  ConstMatrixMap output_weight() const;
  double output_bias() const;

  std::unique_ptr<ChunkCache> make_cache() const override;
  void forward(const Matrix& x, const DerivativeRequest& request, ChunkCache& cache,
               RowVector& out) const override;
  void backward(ChunkCache& cache, const RowVector& out_adjoint, std::span<double> grad,
                GradientScope scope) const override;

 private:
  std::size_t max_width() const { return config_.widths.max(); }
  std::size_t stack_rows() const { return config_.widths.sum(); }
  std::size_t edge_offset(std::size_t edge) const;

  SupernetConfig config_;
  std::array<std::size_t, 4> row_offsets_{};
  std::size_t edges_offset_ = 0;
  std::size_t edge_size_ = 0;
  std::size_t output_offset_ = 0;
  std::size_t alpha_offset_ = 0;
  AlignedVector params_;
};

// Standalone FNN with exactly the listed widths behind an input layer of the
// maximum width, freshly initialized from `seed`.
Fnn build_compact_fnn(const ArchitectureSpec& spec, const WidthTable& widths, std::size_t input_dim,
                      Activation activation, std::uint64_t seed);

// Compact FNN realizing the discretized supernet with its weights copied:
// each kept edge contributes its selected candidate's block restricted to the
// columns fed by the previous kept layer. Equals the supernet exactly when
// alpha is one-hot on `selection`.
Fnn extract_compact_fnn(const MixedNetwork& net, const Discretization& selection);

}  // namespace pinndarts
