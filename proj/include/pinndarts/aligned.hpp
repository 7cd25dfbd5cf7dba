#pragma once

#include <vector>

#include <Eigen/Core>

namespace pinndarts {

// Storage for flat parameter and gradient arrays. Eigen's vectorized
// products peel a data-dependent number of leading elements to reach
// alignment, which changes the summation order; a fixed base alignment makes
// results independent of where the heap places the buffer.
using AlignedVector = std::vector<double, Eigen::aligned_allocator<double>>;

}  // namespace pinndarts
