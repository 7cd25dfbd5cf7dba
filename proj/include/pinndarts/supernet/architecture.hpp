#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pinndarts {

// Neuron counts behind width codes 1..4.
struct WidthTable {
  std::array<std::size_t, 4> widths;

  static WidthTable full() { return {{100, 200, 300, 400}}; }
  static WidthTable small() { return {{16, 32, 48, 64}}; }

  std::size_t width(int code) const;
  std::size_t max() const;
  std::size_t sum() const;
};

inline constexpr std::size_t kCandidateCount = 5;
// Candidate index i < 4 is the linear layer of width code i + 1.
inline constexpr std::size_t kSkipCandidate = 4;

// Discrete FNN architecture as hidden-layer width codes, e.g. "(4,2,3,4,4,4)".
// An empty list connects the input layer straight to the output layer.
struct ArchitectureSpec {
  std::vector<int> codes;

  std::size_t depth() const { return codes.size(); }
  std::string to_string() const;
  static ArchitectureSpec parse(std::string_view text);
  // Uniform-width spec: `depth` copies of `code`.
  static ArchitectureSpec even(int code, std::size_t depth);
  void validate(std::size_t max_depth) const;

  bool operator==(const ArchitectureSpec&) const = default;
};

enum class MixtureMode { softmax, sigmoid };

std::string_view to_string(MixtureMode mode);
MixtureMode parse_mixture_mode(std::string_view name);

// Architecture parameters, one row of kCandidateCount entries per edge.
class AlphaMatrix {
 public:
  AlphaMatrix() = default;
  explicit AlphaMatrix(std::size_t edges) : edges_(edges), values_(edges * kCandidateCount, 0.0) {}
  AlphaMatrix(std::size_t edges, std::vector<double> values);

  // Finite stand-in for a one-hot row: the selected entry is +kOneHot and the
  // rest -kOneHot, which both mixture modes map to exact 1 and 0 weights.
  static constexpr double kOneHot = 1000.0;
  static AlphaMatrix one_hot(std::span<const std::size_t> candidates);
  // Spec candidates on the first edges, skip on the remaining ones.
  static AlphaMatrix one_hot(const ArchitectureSpec& spec, std::size_t edges);

  std::size_t edges() const { return edges_; }
  std::span<const double> row(std::size_t edge) const {
    return {values_.data() + edge * kCandidateCount, kCandidateCount};
  }
  std::span<double> row(std::size_t edge) { return {values_.data() + edge * kCandidateCount, kCandidateCount}; }
  double operator()(std::size_t edge, std::size_t candidate) const {
    return values_[edge * kCandidateCount + candidate];
  }
  double& operator()(std::size_t edge, std::size_t candidate) {
    return values_[edge * kCandidateCount + candidate];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t edges_ = 0;
  std::vector<double> values_;
};

// Softmax (numerically stabilized) or elementwise sigmoid of one alpha row.
std::array<double, kCandidateCount> mixture_weights(std::span<const double> alpha_row, MixtureMode mode);

struct Discretization {
  ArchitectureSpec spec;
  std::size_t skip_count = 0;
  std::vector<std::size_t> selected;  // candidate index per edge
};

// Per-edge argmax (lowest index wins ties); skip-selected edges are dropped.
Discretization discretize(const AlphaMatrix& alpha);

// Per-edge candidate order by decreasing alpha, ties by index; the
// concatenation over edges is the ranking vector used for early stopping.
std::vector<std::uint8_t> alpha_ranking(const AlphaMatrix& alpha);

}  // namespace pinndarts
