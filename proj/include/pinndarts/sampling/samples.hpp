#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pinndarts/io/metadata.hpp"
#include "pinndarts/nn/network.hpp"
#include "pinndarts/pde/problem.hpp"

namespace pinndarts {

struct SampleCounts {
  std::size_t interior = 0;
  std::size_t boundary = 0;
  // Points on t = 0; ignored for steady problems. The velocity condition of
  // the wave problem reuses these points.
  std::size_t initial = 0;
};

struct SampleSet {
  std::string problem;
  std::uint64_t seed = 0;
  PointSet interior{2};
  PointSet boundary{2};
  PointSet initial{2};
};

// Uniform random collocation points: interior strictly inside the domain,
// boundary uniform over the boundary components (the four sides of the
// square, or the two spatial ends x = lo, x = hi for time-dependent
// problems), initial points uniform on t = 0. Each role draws from its own
// stream of `seed`.
SampleSet sample_training(const PdeProblem& problem, SampleCounts counts, std::uint64_t seed);

struct GridShape {
  std::size_t nx = 0;  // along coordinate 0
  std::size_t ny = 0;  // along coordinate 1
  std::size_t size() const { return nx * ny; }
};

// Uniform tensor grid including the endpoints, ordered with x fastest
// (index j * nx + i). `samples` splits the same points by role: t = 0 rows
// are initial, remaining points on the spatial boundary are boundary, the
// rest interior.
struct TestGrid {
  GridShape shape;
  PointSet points{2};
  SampleSet samples;
};

TestGrid test_grid(const PdeProblem& problem, GridShape shape);

// i-th of n uniform points on [lo, hi], endpoints exact.
double grid_coordinate(double lo, double hi, std::size_t i, std::size_t n);

// Default test resolutions: Poisson and wave 100x100, heat 200x100, Burgers 256x100.
GridShape default_grid_shape(ProblemKind kind);

// CSV with columns role,x,y (y holds t for time-dependent problems).
void write_samples_csv(std::ostream& out, const SampleSet& samples, const ArtifactMeta& meta);

}  // namespace pinndarts
