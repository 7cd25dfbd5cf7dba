#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pinndarts/io/metadata.hpp"
#include "pinndarts/nn/network.hpp"
#include "pinndarts/sampling/samples.hpp"

namespace pinndarts {

// Chebyshev-Gauss-Lobatto nodes x_j = cos(j pi / n), j = 0..n (decreasing
// from 1 to -1) and the collocation differentiation matrix on them.
struct ChebGrid {
  std::size_t n = 0;
  Vector nodes;
  Matrix d;
};

// Throws ConfigError for n < 1.
ChebGrid cheb_diff_matrix(std::size_t n);

// Barycentric interpolation through values at the Chebyshev-Lobatto nodes
// (weights (-1)^j, halved at both ends). Returns the node value exactly when
// `x` coincides with a node.
double cheb_interpolate(const Vector& nodes, std::span<const double> values, double x);

struct BurgersSolverConfig {
  std::size_t n = 256;
  // Time step; 0 selects courant * min(h^2 / nu, h) with h the smallest node gap.
  double dt = 0.0;
  double courant = 0.2;
  // Node clustering x = eps tan(xi atan(1/eps)) toward the shock at x = 0.
  double map_eps = 0.05;
  double t_end = 1.0;
  GridShape output{256, 100};
};

// Burgers reference on the uniform output grid, index j * nx + i with x_i
// fastest and t_j = t_end * j / (nt - 1).
struct ReferenceField {
  GridShape shape;
  std::vector<double> values;
  std::size_t n = 0;
  double dt = 0.0;  // step actually used (refined to land on every snapshot)
  std::size_t steps = 0;
  double map_eps = 0.0;
  double t_end = 1.0;
  std::string scheme = "rk4-mapped-chebyshev";

  double at(std::size_t i, std::size_t j) const { return values[j * shape.nx + i]; }
};

// Method of lines on the interior collocation nodes with u(+-1, t) = 0,
// classical RK4 in time. Throws ConfigError for n < 64 and NumericalError
// if the solution blows up.
ReferenceField solve_burgers(const BurgersSolverConfig& config);

inline constexpr int kReferenceFormatVersion = 1;
void write_reference(std::ostream& out, const ReferenceField& field, const ArtifactMeta& meta);
// Throws ConfigError on a malformed or wrong-version file.
ReferenceField read_reference(std::istream& in);

// $PINNDARTS_CACHE_DIR if set, otherwise ".pinndarts-cache".
std::filesystem::path default_cache_dir();
std::filesystem::path reference_cache_path(const std::filesystem::path& dir, const BurgersSolverConfig& config);

// Reads the cached field for `config`; when absent, solves and writes it if
// `build` is set, else throws MissingReferenceError.
ReferenceField load_reference(const std::filesystem::path& dir, const BurgersSolverConfig& config, bool build);

}  // namespace pinndarts
