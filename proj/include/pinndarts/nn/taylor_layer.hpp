#pragma once

#include <array>

#include "pinndarts/autodiff/activation.hpp"
#include "pinndarts/nn/network.hpp"

namespace pinndarts {

using ConstMatrixMap = Eigen::Map<const Matrix>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstVectorMap = Eigen::Map<const Vector>;
using VectorMap = Eigen::Map<Vector>;

// Column-block layout of the Taylor components of a chunk.
struct TaylorLayout {
  TaylorLayout(const DerivativeRequest& request, std::size_t batch_size);

  DerivativeRequest request;
  std::size_t batch;
  std::size_t components;
  std::size_t inputs_with_first = 0;
  std::array<int, kMaxInputs> first{};
  std::array<int, kMaxInputs> second{};

  std::size_t columns() const { return batch * components; }
  template <class M>
  auto block(M& m, int component) const {
    return m.middleCols(static_cast<Eigen::Index>(component) * batch, batch);
  }
};

// Activation derivatives at the value component, kept for the reverse sweep.
struct ActivationCache {
  Matrix s1;
  Matrix s2;
  Matrix s3;
};

// a = sigma applied to the Taylor components of z:
//   a0 = s(z0), a1 = s'(z0) z1, a2 = s''(z0) z1^2 + s'(z0) z2.
void activation_forward(Activation kind, const TaylorLayout& layout, const Matrix& z, Matrix& a,
                        ActivationCache& cache);

// Adjoint of activation_forward: z_bar from a_bar.
void activation_backward(const TaylorLayout& layout, const Matrix& z, const ActivationCache& cache,
                         const Matrix& a_bar, Matrix& z_bar);

// Affine map applied to raw coordinates: the value component is w x + b, the
// first-derivative component for coordinate k is column k of w broadcast, and
// second-derivative components are zero.
void input_affine_forward(const ConstMatrixMap& w, const ConstVectorMap& b, const Matrix& x,
                          const TaylorLayout& layout, Matrix& z);

void input_affine_backward(const Matrix& z_bar, const Matrix& x, const TaylorLayout& layout,
                           MatrixMap w_bar, VectorMap b_bar);

// z = w h, plus b on the value component only.
void hidden_affine_forward(const ConstMatrixMap& w, const ConstVectorMap& b, const Matrix& h,
                           const TaylorLayout& layout, Matrix& z);

// w_bar += z_bar h^T, b_bar += row sums of the value block of z_bar.
void hidden_affine_weight_grad(const Matrix& z_bar, const Matrix& h, const TaylorLayout& layout,
                               MatrixMap w_bar, VectorMap b_bar);

}  // namespace pinndarts
