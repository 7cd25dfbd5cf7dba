#include "pinndarts/supernet/mixed_network.hpp"

#include <cmath>

#include "pinndarts/error.hpp"
#include "pinndarts/random.hpp"

namespace pinndarts {

namespace {

struct MixedCache final : ChunkCache {
  TaylorLayout layout{DerivativeRequest{}, 0};
  Matrix x;
  Matrix z_in;
  ActivationCache act_in;
  std::vector<Matrix> h;
  std::vector<Matrix> z;
  std::vector<Matrix> a;
  std::vector<ActivationCache> act;
  std::vector<std::array<double, kCandidateCount>> mix;
  Matrix h_bar;
  Matrix a_bar;
  Matrix z_bar;
};

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

MixedNetwork::MixedNetwork(SupernetConfig config) : config_(config) {
  if (config_.input_dim == 0 || config_.input_dim > kMaxInputs)
    throw DimensionError("supernet: unsupported input dimension");
  if (config_.edges == 0) throw ConfigError("supernet: at least one edge is required");
  for (auto w : config_.widths.widths)
    if (w == 0) throw ConfigError("supernet: zero width in width table");
  std::size_t row = 0;
  for (std::size_t c = 0; c < 4; ++c) {
    row_offsets_[c] = row;
    row += config_.widths.widths[c];
  }
  const std::size_t wmax = max_width();
  edges_offset_ = wmax * config_.input_dim + wmax;
  edge_size_ = stack_rows() * wmax + stack_rows();
  output_offset_ = edges_offset_ + config_.edges * edge_size_;
  alpha_offset_ = output_offset_ + wmax + 1;
  params_.assign(alpha_offset_ + config_.edges * kCandidateCount, 0.0);
}

MixedNetwork MixedNetwork::initialized(SupernetConfig config, std::uint64_t seed) {
  MixedNetwork net(config);
  Rng rng(seed, "supernet-init");
  const std::size_t wmax = net.max_width();
  auto fill = [&](double* data, std::size_t rows, std::size_t cols, std::size_t stride_rows,
                  double limit) {
    for (std::size_t j = 0; j < cols; ++j)
      for (std::size_t i = 0; i < rows; ++i) data[j * stride_rows + i] = rng.uniform(-limit, limit);
  };
  fill(net.params_.data(), wmax, config.input_dim, wmax,
       std::sqrt(6.0 / static_cast<double>(wmax + config.input_dim)));
  for (std::size_t e = 0; e < config.edges; ++e) {
    for (std::size_t c = 0; c < 4; ++c) {
      const std::size_t w = config.widths.widths[c];
      fill(net.params_.data() + net.edge_offset(e) + net.row_offsets_[c], w, wmax, net.stack_rows(),
           std::sqrt(6.0 / static_cast<double>(wmax + w)));
    }
  }
  fill(net.params_.data() + net.output_offset_, 1, wmax, 1, std::sqrt(6.0 / static_cast<double>(wmax + 1)));
  return net;
}

std::size_t MixedNetwork::edge_offset(std::size_t edge) const { return edges_offset_ + edge * edge_size_; }

AlphaMatrix MixedNetwork::alpha() const {
  return AlphaMatrix(config_.edges, std::vector<double>(params_.begin() + static_cast<std::ptrdiff_t>(alpha_offset_),
                                                        params_.end()));
}

void MixedNetwork::set_alpha(const AlphaMatrix& alpha) {
  if (alpha.edges() != config_.edges) throw DimensionError("supernet: alpha has the wrong number of edges");
  std::copy(alpha.values().begin(), alpha.values().end(), params_.begin() + static_cast<std::ptrdiff_t>(alpha_offset_));
}

ConstMatrixMap MixedNetwork::input_weight() const {
  return {params_.data(), idx(max_width()), idx(config_.input_dim)};
}
ConstVectorMap MixedNetwork::input_bias() const {
  return {params_.data() + max_width() * config_.input_dim, idx(max_width())};
}
ConstMatrixMap MixedNetwork::edge_weight(std::size_t edge) const {
  return {params_.data() + edge_offset(edge), idx(stack_rows()), idx(max_width())};
}
ConstVectorMap MixedNetwork::edge_bias(std::size_t edge) const {
  return {params_.data() + edge_offset(edge) + stack_rows() * max_width(), idx(stack_rows())};
}
MatrixMap MixedNetwork::edge_weight(std::size_t edge) {
  return {params_.data() + edge_offset(edge), idx(stack_rows()), idx(max_width())};
}
VectorMap MixedNetwork::edge_bias(std::size_t edge) {
  return {params_.data() + edge_offset(edge) + stack_rows() * max_width(), idx(stack_rows())};
}
ConstMatrixMap MixedNetwork::output_weight() const {
  return {params_.data() + output_offset_, 1, idx(max_width())};
}
double MixedNetwork::output_bias() const { return params_[output_offset_ + max_width()]; }

std::unique_ptr<ChunkCache> MixedNetwork::make_cache() const { return std::make_unique<MixedCache>(); }

void MixedNetwork::forward(const Matrix& x, const DerivativeRequest& request, ChunkCache& cache_base,
                           RowVector& out) const {
  if (static_cast<std::size_t>(x.rows()) != config_.input_dim)
    throw DimensionError("supernet: point dimension mismatch");
  auto& cache = static_cast<MixedCache&>(cache_base);
  cache.layout = TaylorLayout(request, static_cast<std::size_t>(x.cols()));
  const auto& layout = cache.layout;
  const std::size_t edges = config_.edges;
  cache.x = x;
  cache.h.resize(edges + 1);
  cache.z.resize(edges);
  cache.a.resize(edges);
  cache.act.resize(edges);
  cache.mix.resize(edges);
  const AlphaMatrix alpha = this->alpha();

  input_affine_forward(input_weight(), input_bias(), x, layout, cache.z_in);
  activation_forward(config_.activation, layout, cache.z_in, cache.h[0], cache.act_in);
  for (std::size_t e = 0; e < edges; ++e) {
    cache.mix[e] = mixture_weights(alpha.row(e), config_.mode);
    const auto& mix = cache.mix[e];
    hidden_affine_forward(edge_weight(e), edge_bias(e), cache.h[e], layout, cache.z[e]);
    activation_forward(config_.activation, layout, cache.z[e], cache.a[e], cache.act[e]);
    Matrix& next = cache.h[e + 1];
    next = mix[kSkipCandidate] * cache.h[e];
    for (std::size_t c = 0; c < 4; ++c) {
      const auto w = idx(config_.widths.widths[c]);
      next.topRows(w) += mix[c] * cache.a[e].middleRows(idx(row_offsets_[c]), w);
    }
  }
  out.noalias() = output_weight() * cache.h[edges];
  layout.block(out, 0).array() += output_bias();
}

void MixedNetwork::backward(ChunkCache& cache_base, const RowVector& out_adjoint, std::span<double> grad,
                            GradientScope scope) const {
  if (grad.size() != params_.size()) throw DimensionError("supernet: gradient buffer size mismatch");
  auto& cache = static_cast<MixedCache&>(cache_base);
  const auto& layout = cache.layout;
  const std::size_t edges = config_.edges;
  const std::size_t wmax = max_width();
  const std::size_t rows = stack_rows();

  if (scope.weights) {
    MatrixMap(grad.data() + output_offset_, 1, idx(wmax)).noalias() += out_adjoint * cache.h[edges].transpose();
    grad[output_offset_ + wmax] += layout.block(out_adjoint, 0).sum();
  }
  cache.h_bar.noalias() = output_weight().transpose() * out_adjoint;

  for (std::size_t e = edges; e-- > 0;) {
    const auto& mix = cache.mix[e];
    std::array<double, kCandidateCount> mix_bar{};
    mix_bar[kSkipCandidate] = (cache.h_bar.array() * cache.h[e].array()).sum();
    cache.a_bar.resize(idx(rows), cache.h_bar.cols());
    for (std::size_t c = 0; c < 4; ++c) {
      const auto w = idx(config_.widths.widths[c]);
      const auto r0 = idx(row_offsets_[c]);
      mix_bar[c] = (cache.h_bar.topRows(w).array() * cache.a[e].middleRows(r0, w).array()).sum();
      cache.a_bar.middleRows(r0, w) = mix[c] * cache.h_bar.topRows(w);
    }
    if (scope.architecture) {
      double* g = grad.data() + alpha_offset_ + e * kCandidateCount;
      if (config_.mode == MixtureMode::softmax) {
        double dot = 0.0;
        for (std::size_t j = 0; j < kCandidateCount; ++j) dot += mix[j] * mix_bar[j];
        for (std::size_t j = 0; j < kCandidateCount; ++j) g[j] += mix[j] * (mix_bar[j] - dot);
      } else {
        for (std::size_t j = 0; j < kCandidateCount; ++j) g[j] += mix[j] * (1.0 - mix[j]) * mix_bar[j];
      }
    }
    activation_backward(layout, cache.z[e], cache.act[e], cache.a_bar, cache.z_bar);
    if (scope.weights) {
      double* base = grad.data() + edge_offset(e);
      hidden_affine_weight_grad(cache.z_bar, cache.h[e], layout, MatrixMap(base, idx(rows), idx(wmax)),
                                VectorMap(base + rows * wmax, idx(rows)));
    }
    if (e == 0 && !scope.weights) return;
    cache.h_bar *= mix[kSkipCandidate];
    cache.h_bar.noalias() += edge_weight(e).transpose() * cache.z_bar;
  }

  if (!scope.weights) return;
  activation_backward(layout, cache.z_in, cache.act_in, cache.h_bar, cache.z_bar);
  input_affine_backward(cache.z_bar, cache.x, layout, MatrixMap(grad.data(), idx(wmax), idx(config_.input_dim)),
                        VectorMap(grad.data() + wmax * config_.input_dim, idx(wmax)));
}

Fnn build_compact_fnn(const ArchitectureSpec& spec, const WidthTable& widths, std::size_t input_dim,
                      Activation activation, std::uint64_t seed) {
  std::vector<std::size_t> hidden{widths.max()};
  for (int code : spec.codes) hidden.push_back(widths.width(code));
  return Fnn::initialized(input_dim, std::move(hidden), activation, seed);
}

Fnn extract_compact_fnn(const MixedNetwork& net, const Discretization& selection) {
  const auto& cfg = net.config();
  if (selection.selected.size() != cfg.edges) throw DimensionError("extract: selection does not match edge count");
  const std::size_t wmax = cfg.widths.max();
  std::vector<std::size_t> hidden{wmax};
  for (int code : selection.spec.codes) hidden.push_back(cfg.widths.width(code));
  Fnn fnn(cfg.input_dim, hidden, cfg.activation);

  fnn.weight(0) = net.input_weight();
  fnn.bias(0) = net.input_bias();
  std::size_t layer = 1;
  std::size_t prev = wmax;
  for (std::size_t e = 0; e < cfg.edges; ++e) {
    const std::size_t c = selection.selected[e];
    if (c == kSkipCandidate) continue;
    const auto w = static_cast<Eigen::Index>(cfg.widths.widths[c]);
    const auto r0 = static_cast<Eigen::Index>(net.candidate_row(c));
    fnn.weight(layer) = net.edge_weight(e).block(r0, 0, w, static_cast<Eigen::Index>(prev));
    fnn.bias(layer) = net.edge_bias(e).segment(r0, w);
    prev = static_cast<std::size_t>(w);
    ++layer;
  }
  // Output reads only the first `prev` entries of the padded last node.
  fnn.weight(layer) = net.output_weight().leftCols(static_cast<Eigen::Index>(prev));
  fnn.bias(layer)(0) = net.output_bias();
  return fnn;
}

}  // namespace pinndarts
