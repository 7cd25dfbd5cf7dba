#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pinndarts/train/phases.hpp"

namespace pinndarts {

// Outcome of training one architecture with one seed.
struct EvalRecord {
  ArchitectureSpec spec;
  std::uint64_t seed = 0;
  double test_loss = 0.0;
  double relative_l2 = 0.0;
  bool failed = false;
  std::string error;
  double seconds = 0.0;
  std::vector<double> prediction;  // on the test grid, when the evaluator provides it
};

using Evaluator = std::function<EvalRecord(const ArchitectureSpec& spec, std::uint64_t seed)>;

// Even-width configurations: every width code with every depth 1..max_depth,
// indexed (code - 1) * max_depth + (depth - 1).
struct SearchSpace {
  std::size_t max_depth = 8;

  std::size_t size() const { return 4 * max_depth; }
  ArchitectureSpec config(std::size_t index) const;
  std::size_t index_of(int code, std::size_t depth) const { return static_cast<std::size_t>(code - 1) * max_depth + depth - 1; }
};

struct SeedResult {
  std::uint64_t seed = 0;
  ArchitectureSpec spec;
  double test_loss = 0.0;
  double relative_l2 = 0.0;
  std::size_t evaluations = 0;
  std::size_t search_iterations = 0;  // DARTS variants only
  std::string stop_reason;             // DARTS variants only
  std::vector<ArchitectureSpec> evaluated;  // proposal order (baselines)
  bool failed = false;
  std::string error;
  std::vector<double> prediction;  // of the selected network, if available
  // Monotonic wall time. Baselines: sum over evaluated configurations.
  double search_seconds = 0.0;
  double eval_seconds = 0.0;
};

struct SearchReport {
  std::string method;
  std::string problem;
  std::vector<SeedResult> seeds;
  double mean_error = 0.0;  // over seeds that did not fail
  double wall_seconds = 0.0;

  std::size_t failed_seeds() const;
  std::vector<std::uint64_t> seed_list() const;
};

// Fills mean_error from the per-seed results; NaN if every seed failed.
void finalize(SearchReport& report);

// 100 * mean(report) / mean(grid). Throws ConfigError if the problems or
// seed lists differ.
double error_ratio(const SearchReport& report, const SearchReport& grid);

struct GridResult {
  SearchReport report;
  // records[config_index * seeds + seed_index]
  std::vector<EvalRecord> records;
  // Seed-averaged relative L2 per configuration (NaN where every seed failed).
  std::vector<double> mean_error;
  // Configuration with the smallest seed-averaged error.
  ArchitectureSpec best_average;
};

GridResult grid_search(const SearchSpace& space, const std::vector<std::uint64_t>& seeds, const Evaluator& evaluate,
                       const std::string& problem, std::size_t workers = 1);

// k distinct configurations per seed, uniform without replacement.
SearchReport random_search(const SearchSpace& space, const std::vector<std::uint64_t>& seeds, std::size_t k,
                           const Evaluator& evaluate, const std::string& problem, std::size_t workers = 1);

struct TpeConfig {
  double gamma = 0.25;
  std::size_t startup = 2;
  std::size_t candidates = 24;
};

// Sequential proposals for one seed; exposed for testing. `loss` is
// minimized over the even-width space without repeats.
std::vector<std::size_t> tpe_proposals(const SearchSpace& space, std::size_t k, std::uint64_t seed,
                                       const std::function<double(std::size_t)>& loss, const TpeConfig& config = {});
std::vector<std::size_t> random_proposals(const SearchSpace& space, std::size_t k, std::uint64_t seed);

SearchReport tpe_search(const SearchSpace& space, const std::vector<std::uint64_t>& seeds, std::size_t k,
                        const Evaluator& evaluate, const std::string& problem, const TpeConfig& config = {},
                        std::size_t workers = 1);

enum class DartsVariant { darts, darts_plus, sdarts, sdarts_plus };
std::string_view to_string(DartsVariant variant);
DartsVariant parse_darts_variant(std::string_view name);
MixtureMode mixture_mode(DartsVariant variant);
bool uses_early_stop(DartsVariant variant);

// Everything fixed per problem across methods and seeds.
struct ProblemSetup {
  PdeProblem problem = PdeProblem::poisson(Variant::simple);
  SampleSet train;
  TestGrid test;
  std::vector<double> reference;  // at test.points
  WidthTable widths = WidthTable::full();
  std::size_t max_depth = 8;
  Activation activation = Activation::tanh;
  EvalPhaseConfig eval;
  SearchPhaseConfig search;
  Execution execution = Execution::parallel;
};

// eval_phase wrapped as an Evaluator; numerical failures become failed records.
Evaluator make_evaluator(const ProblemSetup& setup);

// Per-seed callback for artifacts (alpha trajectories, solution dumps).
struct DartsSeedArtifacts {
  std::uint64_t seed;
  const SearchOutcome* search;
  const EvalOutcome* eval;
};
using DartsObserver = std::function<void(const DartsSeedArtifacts&)>;

SearchReport darts_search(const ProblemSetup& setup, DartsVariant variant, const std::vector<std::uint64_t>& seeds,
                          std::size_t workers = 1, const DartsObserver& observer = {});

}  // namespace pinndarts
