#pragma once

#include <span>
#include <vector>

namespace pinndarts {

// ||prediction - reference||_2 / ||reference||_2 over all entries, unweighted.
// Throws DimensionError on length mismatch and NumericalError when the
// reference norm is zero.
double relative_l2(std::span<const double> prediction, std::span<const double> reference);

// 1-based ranks; tied values share the average of their ranks.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average-rank vectors. Throws DimensionError on
// length mismatch or fewer than two pairs, NumericalError if either sequence
// is constant.
double spearman(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> values);

}  // namespace pinndarts
