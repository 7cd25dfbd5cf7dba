#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "pinndarts/io/metadata.hpp"
#include "pinndarts/loss/pinn_loss.hpp"
#include "pinndarts/nn/fnn.hpp"
#include "pinndarts/supernet/mixed_network.hpp"

namespace pinndarts {

struct EvalPhaseConfig {
  std::size_t iterations = 10000;
  double lr_initial = 5e-4;
  double lr_final = 1e-5;
  LossWeights weights;
};

// Geometric decay lr(k) = lr0 (lr_f / lr0)^(k / (K - 1)); exact at both ends.
// Throws ConfigError when k >= K or the rates are not lr0 >= lr_f > 0.
double lr_schedule(const EvalPhaseConfig& config, std::size_t iteration);

struct SearchPhaseConfig {
  std::size_t max_iterations = 2000;
  double alpha_lr = 0.2;
  double weight_lr = 1e-4;
  bool early_stop = false;
  std::size_t stability_window = 100;
  std::size_t skip_threshold = 6;
  // Keep alpha fixed and train only the network weights.
  bool freeze_alpha = false;
  LossWeights weights;
};

enum class StopReason { none, max_iterations, ranking_stable, skip_threshold };
std::string_view to_string(StopReason reason);

// Stop when discretizing the current alpha drops at least `skip_threshold`
// edges, or when the last `stability_window` ranking vectors are identical.
// The skip rule is checked first.
StopReason early_stop_check(std::span<const std::vector<std::uint8_t>> ranking_history, std::size_t skip_count,
                            const SearchPhaseConfig& config);

struct SearchOutcome {
  Discretization selection;
  StopReason reason = StopReason::max_iterations;
  std::size_t iterations = 0;
  // alpha before the first update and after every iteration
  std::vector<AlphaMatrix> alpha_trajectory;
  std::vector<std::vector<std::uint8_t>> rankings;
  std::vector<double> train_loss;  // at the pre-update weights of each iteration
  std::vector<double> test_loss;
};

// First-order bilevel search: each iteration takes grad_w of the training
// loss and grad_alpha of the test loss at the same (w, alpha), then applies
// Adam to both groups. Throws NumericalError naming the iteration on a
// non-finite loss.
SearchOutcome search_phase(MixedNetwork& net, const PdeProblem& problem, const SampleSet& train,
                           const SampleSet& test, const SearchPhaseConfig& config,
                           Execution execution = Execution::parallel);

struct EvalOutcome {
  Fnn network;
  LossBreakdown train_loss;
  LossBreakdown test_loss;
  double relative_l2 = 0.0;
};

// Trains a freshly initialized compact network for `spec` with full-batch Adam
// under lr_schedule and measures it on the test grid against `reference`
// (values at test.points).
EvalOutcome eval_phase(const ArchitectureSpec& spec, const WidthTable& widths, Activation activation,
                       const PdeProblem& problem, const SampleSet& train, const TestGrid& test,
                       std::span<const double> reference, const EvalPhaseConfig& config, std::uint64_t seed,
                       Execution execution = Execution::parallel);

// Values of the closed-form solution at the grid points.
std::vector<double> exact_field(const PdeProblem& problem, const PointSet& points);

// Text checkpoint: version header, architecture, then one parameter per
// line in round-trip precision.
inline constexpr int kCheckpointVersion = 1;
void save_checkpoint(std::ostream& out, const Fnn& net, const ArchitectureSpec& spec);
struct Checkpoint {
  Fnn network;
  ArchitectureSpec spec;
};
// Throws ConfigError on a bad header, version or shape.
Checkpoint load_checkpoint(std::istream& in);

// CSV rows iteration,edge,candidate,alpha.
void write_alpha_trajectory_csv(std::ostream& out, std::span<const AlphaMatrix> trajectory, const ArtifactMeta& meta);

}  // namespace pinndarts
