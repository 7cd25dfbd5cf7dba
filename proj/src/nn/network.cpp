#include "pinndarts/nn/network.hpp"

#include "pinndarts/error.hpp"

namespace pinndarts {

PointSet::PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 || coords_.size() % dim_ != 0) throw DimensionError("point set: ragged coordinate list");
}

void PointSet::push_back(std::span<const double> point) {
  if (point.size() != dim_) throw DimensionError("point set: point dimension mismatch");
  coords_.insert(coords_.end(), point.begin(), point.end());
}

void PointSet::append(const PointSet& other) {
  if (other.empty()) return;
  if (other.dim_ != dim_) throw DimensionError("point set: dimension mismatch on append");
  coords_.insert(coords_.end(), other.coords_.begin(), other.coords_.end());
}

Matrix PointSet::columns(std::size_t first, std::size_t count) const {
  Matrix x(dim_, count);
  for (std::size_t j = 0; j < count; ++j)
    for (std::size_t k = 0; k < dim_; ++k) x(k, j) = coords_[(first + j) * dim_ + k];
  return x;
}

}  // namespace pinndarts
