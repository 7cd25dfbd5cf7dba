#include "pinndarts/sampling/samples.hpp"

#include <ostream>

#include "pinndarts/error.hpp"
#include "pinndarts/random.hpp"

namespace pinndarts {

SampleSet sample_training(const PdeProblem& problem, SampleCounts counts, std::uint64_t seed) {
  if (counts.interior == 0 || counts.boundary == 0)
    throw ConfigError("interior and boundary sample counts must be positive");
  if (problem.time_dependent() && counts.initial == 0)
    throw ConfigError(problem.name() + " needs a positive initial sample count");

  const Box& box = problem.domain();
  const std::string name = problem.name();
  SampleSet s;
  s.problem = name;
  s.seed = seed;

  Rng interior(seed, name + "/interior");
  for (std::size_t i = 0; i < counts.interior; ++i) {
    const double x = interior.uniform(box.lo[0], box.hi[0]);
    const double y = interior.uniform(box.lo[1], box.hi[1]);
    s.interior.push_back(std::array{x, y});
  }

  Rng boundary(seed, name + "/boundary");
  for (std::size_t i = 0; i < counts.boundary; ++i) {
    if (problem.time_dependent()) {
      const double x = boundary.below(2) == 0 ? box.lo[0] : box.hi[0];
      const double t = boundary.uniform(box.lo[1], box.hi[1]);
      s.boundary.push_back(std::array{x, t});
      continue;
    }
    // Four sides of equal length.
    const auto side = boundary.below(4);
    const double u = boundary.uniform();
    std::array<double, 2> p{};
    const std::size_t fixed = side / 2;
    const std::size_t free = 1 - fixed;
    p[fixed] = side % 2 == 0 ? box.lo[fixed] : box.hi[fixed];
    p[free] = box.lo[free] + (box.hi[free] - box.lo[free]) * u;
    s.boundary.push_back(p);
  }

  if (problem.time_dependent()) {
    Rng initial(seed, name + "/initial");
    for (std::size_t i = 0; i < counts.initial; ++i)
      s.initial.push_back(std::array{initial.uniform(box.lo[0], box.hi[0]), box.lo[1]});
  }
  return s;
}

TestGrid test_grid(const PdeProblem& problem, GridShape shape) {
  if (shape.nx < 2 || shape.ny < 2) throw ConfigError("test grid needs at least 2 points per axis");
  const Box& box = problem.domain();
  TestGrid g;
  g.shape = shape;
  g.samples.problem = problem.name();
  auto coord = [&](std::size_t axis, std::size_t i, std::size_t n) {
    return grid_coordinate(box.lo[axis], box.hi[axis], i, n);
  };
  for (std::size_t j = 0; j < shape.ny; ++j) {
    for (std::size_t i = 0; i < shape.nx; ++i) {
      const std::array p{coord(0, i, shape.nx), coord(1, j, shape.ny)};
      g.points.push_back(p);
      const bool x_edge = i == 0 || i == shape.nx - 1;
      const bool y_edge = j == 0 || j == shape.ny - 1;
      if (problem.time_dependent() && j == 0)
        g.samples.initial.push_back(p);
      else if (x_edge || (!problem.time_dependent() && y_edge))
        g.samples.boundary.push_back(p);
      else
        g.samples.interior.push_back(p);
    }
  }
  return g;
}

double grid_coordinate(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

GridShape default_grid_shape(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::heat:
      return {200, 100};
    case ProblemKind::burgers:
      return {256, 100};
    case ProblemKind::poisson:
    case ProblemKind::wave:
      break;
  }
  return {100, 100};
}

void write_samples_csv(std::ostream& out, const SampleSet& samples, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "samples", 1);
  out << "role,x,y\n";
  out.precision(17);
  auto rows = [&](const char* role, const PointSet& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i) out << role << ',' << pts[i][0] << ',' << pts[i][1] << '\n';
  };
  rows("interior", samples.interior);
  rows("boundary", samples.boundary);
  rows("initial", samples.initial);
}

}  // namespace pinndarts
