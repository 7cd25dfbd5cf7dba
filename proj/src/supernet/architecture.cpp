#include "pinndarts/supernet/architecture.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "pinndarts/error.hpp"

namespace pinndarts {

std::size_t WidthTable::width(int code) const {
  if (code < 1 || code > 4) throw ConfigError("width code must be in [1, 4], got " + std::to_string(code));
  return widths[static_cast<std::size_t>(code - 1)];
}

std::size_t WidthTable::max() const { return *std::max_element(widths.begin(), widths.end()); }

std::size_t WidthTable::sum() const { return std::accumulate(widths.begin(), widths.end(), std::size_t{0}); }

std::string ArchitectureSpec::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(codes[i]);
  }
  return s + ")";
}

ArchitectureSpec ArchitectureSpec::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw ConfigError("architecture must be written as (c1,c2,...): '" + std::string(text) + "'");
  text = trim(text.substr(1, text.size() - 2));
  ArchitectureSpec spec;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = trim(text.substr(0, comma));
    int code = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), code);
    if (ec != std::errc{} || ptr != token.data() + token.size() || code < 1 || code > 4)
      throw ConfigError("invalid width code '" + std::string(token) + "'");
    spec.codes.push_back(code);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
    if (trim(text).empty()) throw ConfigError("trailing comma in architecture");
  }
  return spec;
}

ArchitectureSpec ArchitectureSpec::even(int code, std::size_t depth) {
  if (code < 1 || code > 4) throw ConfigError("width code must be in [1, 4]");
  return {std::vector<int>(depth, code)};
}

void ArchitectureSpec::validate(std::size_t max_depth) const {
  if (codes.size() > max_depth)
    throw ConfigError("architecture " + to_string() + " deeper than " + std::to_string(max_depth));
  for (int c : codes)
    if (c < 1 || c > 4) throw ConfigError("architecture " + to_string() + " has an invalid width code");
}

std::string_view to_string(MixtureMode mode) { return mode == MixtureMode::softmax ? "softmax" : "sigmoid"; }

MixtureMode parse_mixture_mode(std::string_view name) {
  if (name == "softmax") return MixtureMode::softmax;
  if (name == "sigmoid") return MixtureMode::sigmoid;
  throw ConfigError("unknown mixture mode '" + std::string(name) + "'");
}

AlphaMatrix::AlphaMatrix(std::size_t edges, std::vector<double> values) : edges_(edges), values_(std::move(values)) {
  if (values_.size() != edges_ * kCandidateCount) throw DimensionError("alpha matrix: wrong number of entries");
}

AlphaMatrix AlphaMatrix::one_hot(std::span<const std::size_t> candidates) {
  AlphaMatrix a(candidates.size());
  for (std::size_t e = 0; e < candidates.size(); ++e) {
    if (candidates[e] >= kCandidateCount) throw ConfigError("one-hot alpha: candidate index out of range");
    for (std::size_t c = 0; c < kCandidateCount; ++c) a(e, c) = c == candidates[e] ? kOneHot : -kOneHot;
  }
  return a;
}

AlphaMatrix AlphaMatrix::one_hot(const ArchitectureSpec& spec, std::size_t edges) {
  spec.validate(edges);
  std::vector<std::size_t> candidates(edges, kSkipCandidate);
  for (std::size_t e = 0; e < spec.depth(); ++e) candidates[e] = static_cast<std::size_t>(spec.codes[e] - 1);
  return one_hot(candidates);
}

std::array<double, kCandidateCount> mixture_weights(std::span<const double> alpha_row, MixtureMode mode) {
  if (alpha_row.size() != kCandidateCount) throw DimensionError("mixture weights: alpha row must have 5 entries");
  for (double a : alpha_row)
    if (!std::isfinite(a)) throw NumericalError("mixture weights: non-finite alpha");
  std::array<double, kCandidateCount> w{};
  if (mode == MixtureMode::softmax) {
    const double m = *std::max_element(alpha_row.begin(), alpha_row.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < kCandidateCount; ++i) sum += w[i] = std::exp(alpha_row[i] - m);
    for (auto& v : w) v /= sum;
  } else {
    for (std::size_t i = 0; i < kCandidateCount; ++i) w[i] = 1.0 / (1.0 + std::exp(-alpha_row[i]));
  }
  return w;
}

Discretization discretize(const AlphaMatrix& alpha) {
  Discretization d;
  for (double a : alpha.values())
    if (!std::isfinite(a)) throw NumericalError("discretize: non-finite alpha");
  for (std::size_t e = 0; e < alpha.edges(); ++e) {
    const auto row = alpha.row(e);
    const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    d.selected.push_back(best);
    if (best == kSkipCandidate)
      ++d.skip_count;
    else
      d.spec.codes.push_back(static_cast<int>(best) + 1);
  }
  return d;
}

std::vector<std::uint8_t> alpha_ranking(const AlphaMatrix& alpha) {
  std::vector<std::uint8_t> ranking;
  ranking.reserve(alpha.values().size());
  for (std::size_t e = 0; e < alpha.edges(); ++e) {
    std::array<std::uint8_t, kCandidateCount> order{0, 1, 2, 3, 4};
    const auto row = alpha.row(e);
    std::stable_sort(order.begin(), order.end(), [&](std::uint8_t a, std::uint8_t b) { return row[a] > row[b]; });
    ranking.insert(ranking.end(), order.begin(), order.end());
  }
  return ranking;
}

}  // namespace pinndarts
