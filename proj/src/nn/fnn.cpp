#include "pinndarts/nn/fnn.hpp"

#include <cmath>

#include "pinndarts/error.hpp"
#include "pinndarts/nn/batch.hpp"
#include "pinndarts/random.hpp"

namespace pinndarts {

namespace {

struct FnnCache final : ChunkCache {
  TaylorLayout layout{DerivativeRequest{}, 0};
  Matrix x;
  std::vector<Matrix> z;
  std::vector<Matrix> a;
  std::vector<ActivationCache> act;
  Matrix a_bar;
  Matrix z_bar;
};

}  // namespace

Fnn::Fnn(std::size_t input_dim, std::vector<std::size_t> hidden_widths, Activation activation)
    : input_dim_(input_dim), widths_(std::move(hidden_widths)), activation_(activation) {
  if (input_dim_ == 0 || input_dim_ > kMaxInputs) throw DimensionError("fnn: unsupported input dimension");
  if (widths_.empty()) throw DimensionError("fnn: at least the input layer is required");
  for (auto w : widths_)
    if (w == 0) throw DimensionError("fnn: zero-width layer");
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    offsets_.push_back(offset);
    offset += layer_rows(l) * layer_cols(l) + layer_rows(l);
  }
  params_.assign(offset, 0.0);
}

Fnn Fnn::initialized(std::size_t input_dim, std::vector<std::size_t> hidden_widths, Activation activation,
                     std::uint64_t seed) {
  Fnn net(input_dim, std::move(hidden_widths), activation);
  Rng rng(seed, "fnn-init");
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const double limit = std::sqrt(6.0 / static_cast<double>(net.layer_rows(l) + net.layer_cols(l)));
    auto w = net.weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
  }
  return net;
}

std::size_t Fnn::layer_rows(std::size_t layer) const {
  return layer < widths_.size() ? widths_[layer] : 1;
}

std::size_t Fnn::layer_cols(std::size_t layer) const {
  return layer == 0 ? input_dim_ : widths_[layer - 1];
}

std::size_t Fnn::bias_offset(std::size_t layer) const {
  return offsets_[layer] + layer_rows(layer) * layer_cols(layer);
}

ConstMatrixMap Fnn::weight(std::size_t layer) const {
  return {params_.data() + offsets_[layer], static_cast<Eigen::Index>(layer_rows(layer)),
          static_cast<Eigen::Index>(layer_cols(layer))};
}
MatrixMap Fnn::weight(std::size_t layer) {
  return {params_.data() + offsets_[layer], static_cast<Eigen::Index>(layer_rows(layer)),
          static_cast<Eigen::Index>(layer_cols(layer))};
}
ConstVectorMap Fnn::bias(std::size_t layer) const {
  return {params_.data() + bias_offset(layer), static_cast<Eigen::Index>(layer_rows(layer))};
}
VectorMap Fnn::bias(std::size_t layer) {
  return {params_.data() + bias_offset(layer), static_cast<Eigen::Index>(layer_rows(layer))};
}

std::vector<double> Fnn::predict(const PointSet& points) const {
  if (!points.empty() && points.dim() != input_dim_) throw DimensionError("fnn: point dimension mismatch");
  std::vector<double> u(points.size());
  const auto act = [this](double z) { return activate(activation_, z).f; };
  Matrix h, z;
  for (std::size_t first = 0; first < points.size(); first += kChunkPoints) {
    const std::size_t count = std::min(kChunkPoints, points.size() - first);
    h = points.columns(first, count);
    for (std::size_t l = 0; l + 1 < layer_count(); ++l) {
      z.noalias() = weight(l) * h;
      z.colwise() += bias(l);
      h = z.unaryExpr(act);
    }
    const RowVector out = (weight(layer_count() - 1) * h).array() + bias(layer_count() - 1)(0);
    for (std::size_t j = 0; j < count; ++j) u[first + j] = out(static_cast<Eigen::Index>(j));
  }
  require_finite(u, "network output");
  return u;
}

std::unique_ptr<ChunkCache> Fnn::make_cache() const { return std::make_unique<FnnCache>(); }

void Fnn::forward(const Matrix& x, const DerivativeRequest& request, ChunkCache& cache_base,
                  RowVector& out) const {
  if (static_cast<std::size_t>(x.rows()) != input_dim_) throw DimensionError("fnn: point dimension mismatch");
  auto& cache = static_cast<FnnCache&>(cache_base);
  cache.layout = TaylorLayout(request, static_cast<std::size_t>(x.cols()));
  const auto& layout = cache.layout;
  const std::size_t hidden = widths_.size();
  cache.x = x;
  cache.z.resize(hidden);
  cache.a.resize(hidden);
  cache.act.resize(hidden);

  input_affine_forward(weight(0), bias(0), x, layout, cache.z[0]);
  activation_forward(activation_, layout, cache.z[0], cache.a[0], cache.act[0]);
  for (std::size_t l = 1; l < hidden; ++l) {
    hidden_affine_forward(weight(l), bias(l), cache.a[l - 1], layout, cache.z[l]);
    activation_forward(activation_, layout, cache.z[l], cache.a[l], cache.act[l]);
  }
  const std::size_t last = hidden;
  out.noalias() = weight(last) * cache.a[hidden - 1];
  layout.block(out, 0).array() += bias(last)(0);
}

void Fnn::backward(ChunkCache& cache_base, const RowVector& out_adjoint, std::span<double> grad,
                   GradientScope scope) const {
  if (!scope.weights) return;
  if (grad.size() != params_.size()) throw DimensionError("fnn: gradient buffer size mismatch");
  auto& cache = static_cast<FnnCache&>(cache_base);
  const auto& layout = cache.layout;
  const std::size_t hidden = widths_.size();
  const std::size_t last = hidden;

  auto grad_w = [&](std::size_t l) {
    return MatrixMap(grad.data() + offsets_[l], static_cast<Eigen::Index>(layer_rows(l)),
                     static_cast<Eigen::Index>(layer_cols(l)));
  };
  auto grad_b = [&](std::size_t l) {
    return VectorMap(grad.data() + bias_offset(l), static_cast<Eigen::Index>(layer_rows(l)));
  };

  grad_w(last).noalias() += out_adjoint * cache.a[hidden - 1].transpose();
  grad_b(last)(0) += layout.block(out_adjoint, 0).sum();
  cache.a_bar.noalias() = weight(last).transpose() * out_adjoint;

  for (std::size_t l = hidden; l-- > 0;) {
    activation_backward(layout, cache.z[l], cache.act[l], cache.a_bar, cache.z_bar);
    if (l == 0) {
      input_affine_backward(cache.z_bar, cache.x, layout, grad_w(0), grad_b(0));
    } else {
      hidden_affine_weight_grad(cache.z_bar, cache.a[l - 1], layout, grad_w(l), grad_b(l));
      cache.a_bar.noalias() = weight(l).transpose() * cache.z_bar;
    }
  }
}

}  // namespace pinndarts
