#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pinndarts/metrics/correlation.hpp"
#include "pinndarts/search/report.hpp"
#include "pinndarts/spectral/burgers.hpp"

namespace pinndarts {

inline constexpr int kConfigFormatVersion = 1;

// A fully resolved experiment. Built from a profile's defaults for the chosen
// problem, then overridden by the config file, then by command-line flags.
struct ExperimentConfig {
  std::string profile = "full";
  ProblemKind problem = ProblemKind::poisson;
  Variant variant = Variant::simple;
  // grid, random-k<k>, bayes-k<k>, darts, darts+, sdarts, sdarts+, correlation
  std::vector<std::string> methods{"grid"};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  // Training points are drawn once from this seed and shared by every method and seed.
  std::uint64_t sample_seed = 0;
  SampleCounts samples;
  GridShape test_grid;
  WidthTable widths = WidthTable::full();
  std::size_t max_depth = 8;
  Activation activation = Activation::tanh;
  EvalPhaseConfig eval;
  SearchPhaseConfig search;
  TpeConfig tpe;
  BurgersSolverConfig reference;
  bool build_reference = true;
  Execution execution = Execution::parallel;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "results";
  std::filesystem::path cache_dir;  // empty: default_cache_dir()
};

// Profile defaults for one problem: "full" (the complete protocol) or "small"
// (widths 16..64, depth <= 4, 2000 evaluation iterations, 500 interior points).
ExperimentConfig profile_defaults(const std::string& profile, ProblemKind problem, Variant variant);

// Parses and validates a config document. Unknown keys, unknown methods and
// out-of-range values throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
// Re-checks a config after command-line overrides.
void validate(const ExperimentConfig& config);

// Canonical JSON of every setting that affects numeric results (paths and
// the worker count are left out).
nlohmann::json config_to_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

// Samples, test grid and reference field. Throws MissingReferenceError for
// Burgers when the reference is neither cached nor buildable.
ProblemSetup make_setup(const ExperimentConfig& config);

struct MethodTimes {
  std::string method;
  std::vector<std::uint64_t> seeds;
  std::vector<double> search_seconds;
  std::vector<double> eval_seconds;
};

struct ExperimentResult {
  std::vector<SearchReport> reports;  // in method order
  std::vector<ComparisonRow> comparison;
  std::optional<GridResult> grid;
  std::optional<CorrelationStudy> correlation;
  std::vector<MethodTimes> times;
  std::vector<std::filesystem::path> files;
  // True when some requested search method failed numerically on every seed.
  bool all_seeds_failed = false;
};

// Runs every requested method and writes the artifacts under output_dir:
//   reports/<method>.json, reports/<method>.csv   one row per seed
//   comparison.csv                                  method, error, time, error ratio
//   heatmap.csv                                     grid runs only
//   fields/<method>/{reference,prediction,error}.csv  best seed
//   alpha/<method>-seed<k>.csv, checkpoints/<method>.txt  DARTS variants
//   correlation.csv, reports/correlation.json      correlation runs
//   timings.csv                                     wall time per phase
// Only comparison.csv and timings.csv carry timings.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Writes reference, prediction and |reference - prediction| on the test grid
// as three CSV files with columns i,j,x,y,value.
std::vector<std::filesystem::path> emit_solution_dump(const std::filesystem::path& dir, const TestGrid& grid,
                                                      std::span<const double> reference,
                                                      std::span<const double> prediction, const ArtifactMeta& meta);

// Total and per-seed means used by the comparison table.
double mean_seconds_per_seed(const MethodTimes& times);

}  // namespace pinndarts
