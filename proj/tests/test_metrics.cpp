#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pinndarts/error.hpp"
#include "pinndarts/metrics/correlation.hpp"
#include "pinndarts/metrics/metrics.hpp"
#include "pinndarts/random.hpp"

using namespace pinndarts;

TEST_CASE("relative L2") {
  const std::vector<double> ref{1.0, -2.0, 0.5, 3.0};
  CHECK(relative_l2(ref, ref) == 0.0);
  std::vector<double> scaled;
  for (double v : ref) scaled.push_back(1.1 * v);
  CHECK(std::abs(relative_l2(scaled, ref) - 0.1) < 1e-12);

  Rng rng(1, "fields");
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(10), b(10), c(10);
    for (int i = 0; i < 10; ++i) {
      a[i] = rng.uniform(-1, 1);
      b[i] = rng.uniform(-1, 1);
      c[i] = rng.uniform(-1, 1);
    }
    double num = 0, den = 0;
    for (int i = 0; i < 10; ++i) {
      num += (a[i] - c[i]) * (a[i] - c[i]);
      den += c[i] * c[i];
    }
    CHECK(std::abs(relative_l2(a, c) - std::sqrt(num) / std::sqrt(den)) < 1e-12);
    double nb = 0;
    for (double v : b) nb += v * v;
    // ||a - c|| <= ||a - b|| + ||b - c||
    const double nc = std::sqrt(den);
    CHECK(relative_l2(a, c) * nc <= relative_l2(a, b) * std::sqrt(nb) + relative_l2(b, c) * nc + 1e-12);
  }
  CHECK_THROWS_AS(relative_l2(ref, std::vector<double>(4, 0.0)), NumericalError);
  CHECK_THROWS_AS(relative_l2(ref, std::vector<double>(3, 1.0)), DimensionError);
}

TEST_CASE("Spearman correlation") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(spearman(x, std::vector<double>{2, 4, 8, 16, 32}) == doctest::Approx(1.0));
  CHECK(spearman(x, std::vector<double>{5, 4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(average_ranks(std::vector<double>{10, 20, 20, 5}) == std::vector<double>{2, 3.5, 3.5, 1});
  // Hand-computed with average ranks: x ranks 1..5, y ranks 1,2.5,2.5,4,5.
  const double r = spearman(x, std::vector<double>{1, 2, 2, 3, 4});
  CHECK(r == doctest::Approx(9.5 / std::sqrt(10.0 * 9.5)).epsilon(1e-12));

  Rng rng(2, "pairs");
  std::vector<double> a(30), b(30), ea, cb;
  for (int i = 0; i < 30; ++i) {
    a[i] = rng.uniform(-2, 2);
    b[i] = a[i] + rng.uniform(-1, 1);
  }
  for (double v : a) ea.push_back(std::exp(v));
  for (double v : b) cb.push_back(v * v * v);
  CHECK(spearman(ea, cb) == doctest::Approx(spearman(a, b)).epsilon(1e-14));

  CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), DimensionError);
  CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), DimensionError);
  CHECK_THROWS_AS(spearman(x, std::vector<double>(5, 3.0)), NumericalError);
}

TEST_CASE("mean") {
  const std::vector<double> v{0.1, 0.2, 0.4};
  CHECK(std::abs(mean(v) - (0.1 + 0.2 + 0.4) / 3) <= 1e-12);
}

TEST_CASE("correlation study with a mocked evaluator") {
  const Evaluator ev = [](const ArchitectureSpec& spec, std::uint64_t seed) {
    EvalRecord r;
    r.spec = spec;
    r.seed = seed;
    r.test_loss = spec.codes[0] * 10.0 + static_cast<double>(spec.depth()) + 0.01 * static_cast<double>(seed);
    r.relative_l2 = r.test_loss;
    return r;
  };
  const auto small = correlation_study({1, 2}, {1, 2}, {7}, ev);
  CHECK(small.records.size() == 4);
  CHECK(small.coefficient == doctest::Approx(1.0));
  const auto full = correlation_study({1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2}, ev);
  CHECK(full.records.size() == 32);
  std::ostringstream out;
  write_scatter_csv(out, full, {"z"});
  const auto s = out.str();
  CHECK(s.find("loss,error,architecture,seed\n") != std::string::npos);
  CHECK(std::count(s.begin(), s.end(), '\n') == 2 + 32);
}
