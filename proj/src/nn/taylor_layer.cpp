#include "pinndarts/nn/taylor_layer.hpp"

namespace pinndarts {

TaylorLayout::TaylorLayout(const DerivativeRequest& req, std::size_t batch_size)
    : request(req), batch(batch_size), components(req.component_count()) {
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    first[k] = req.first_component(k);
    second[k] = req.second_component(k);
    inputs_with_first += first[k] >= 0;
  }
}

void activation_forward(Activation kind, const TaylorLayout& layout, const Matrix& z, Matrix& a,
                        ActivationCache& cache) {
  const auto rows = z.rows();
  const auto b = static_cast<Eigen::Index>(layout.batch);
  a.resize(rows, z.cols());
  cache.s1.resize(rows, b);
  cache.s2.resize(rows, b);
  cache.s3.resize(rows, b);
  for (Eigen::Index j = 0; j < b; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const ActivationValues v = activate(kind, z(i, j));
      a(i, j) = v.f;
      cache.s1(i, j) = v.d1;
      cache.s2(i, j) = v.d2;
      cache.s3(i, j) = v.d3;
    }
  }
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    if (layout.first[k] < 0) continue;
    const auto z1 = layout.block(z, layout.first[k]).array();
    layout.block(a, layout.first[k]).array() = cache.s1.array() * z1;
    if (layout.second[k] >= 0) {
      const auto z2 = layout.block(z, layout.second[k]).array();
      layout.block(a, layout.second[k]).array() =
          cache.s2.array() * z1.square() + cache.s1.array() * z2;
    }
  }
}

void activation_backward(const TaylorLayout& layout, const Matrix& z, const ActivationCache& cache,
                         const Matrix& a_bar, Matrix& z_bar) {
  z_bar.resize(a_bar.rows(), a_bar.cols());
  layout.block(z_bar, 0).array() = cache.s1.array() * layout.block(a_bar, 0).array();
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    const int c1 = layout.first[k];
    if (c1 < 0) continue;
    const auto z1 = layout.block(z, c1).array();
    const auto a1_bar = layout.block(a_bar, c1).array();
    auto z0_bar = layout.block(z_bar, 0).array();
    z0_bar += cache.s2.array() * z1 * a1_bar;
    layout.block(z_bar, c1).array() = cache.s1.array() * a1_bar;
    const int c2 = layout.second[k];
    if (c2 < 0) continue;
    const auto z2 = layout.block(z, c2).array();
    const auto a2_bar = layout.block(a_bar, c2).array();
    z0_bar += (cache.s3.array() * z1.square() + cache.s2.array() * z2) * a2_bar;
    layout.block(z_bar, c1).array() += 2.0 * cache.s2.array() * z1 * a2_bar;
    layout.block(z_bar, c2).array() = cache.s1.array() * a2_bar;
  }
}

void input_affine_forward(const ConstMatrixMap& w, const ConstVectorMap& b, const Matrix& x,
                          const TaylorLayout& layout, Matrix& z) {
  z.resize(w.rows(), static_cast<Eigen::Index>(layout.columns()));
  auto z0 = layout.block(z, 0);
  z0.noalias() = w * x;
  z0.colwise() += b;
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    if (layout.first[k] < 0) continue;
    layout.block(z, layout.first[k]).colwise() = w.col(static_cast<Eigen::Index>(k));
    if (layout.second[k] >= 0) layout.block(z, layout.second[k]).setZero();
  }
}

void input_affine_backward(const Matrix& z_bar, const Matrix& x, const TaylorLayout& layout,
                           MatrixMap w_bar, VectorMap b_bar) {
  const auto z0_bar = layout.block(z_bar, 0);
  w_bar.noalias() += z0_bar * x.transpose();
  b_bar += z0_bar.rowwise().sum();
  for (std::size_t k = 0; k < kMaxInputs; ++k) {
    if (layout.first[k] < 0) continue;
    w_bar.col(static_cast<Eigen::Index>(k)) += layout.block(z_bar, layout.first[k]).rowwise().sum();
  }
}

void hidden_affine_forward(const ConstMatrixMap& w, const ConstVectorMap& b, const Matrix& h,
                           const TaylorLayout& layout, Matrix& z) {
  z.resize(w.rows(), h.cols());
  z.noalias() = w * h;
  layout.block(z, 0).colwise() += b;
}

void hidden_affine_weight_grad(const Matrix& z_bar, const Matrix& h, const TaylorLayout& layout,
                               MatrixMap w_bar, VectorMap b_bar) {
  w_bar.noalias() += z_bar * h.transpose();
  b_bar += layout.block(z_bar, 0).rowwise().sum();
}

}  // namespace pinndarts
