#include "pinndarts/search/strategies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "pinndarts/error.hpp"
#include "pinndarts/metrics/metrics.hpp"
#include "pinndarts/random.hpp"
#include "pinndarts/search/pool.hpp"

namespace pinndarts {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Index of the lowest-error record among `records`; ties keep the earlier one.
// Returns records.size() when every record failed.
std::size_t best_record(const std::vector<const EvalRecord*>& records) {
  std::size_t best = records.size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i]->failed) continue;
    if (best == records.size() || records[i]->relative_l2 < records[best]->relative_l2) best = i;
  }
  return best;
}

SeedResult seed_result(std::uint64_t seed, const std::vector<const EvalRecord*>& records) {
  SeedResult r;
  r.seed = seed;
  r.evaluations = records.size();
  for (const auto* rec : records) {
    r.evaluated.push_back(rec->spec);
    r.eval_seconds += rec->seconds;
  }
  const std::size_t best = best_record(records);
  if (best == records.size()) {
    r.failed = true;
    r.error = records.empty() ? "no evaluations" : records.front()->error;
    return r;
  }
  r.spec = records[best]->spec;
  r.test_loss = records[best]->test_loss;
  r.relative_l2 = records[best]->relative_l2;
  r.prediction = records[best]->prediction;
  return r;
}

// Evaluates proposals[s] for every seed s, all jobs in one pool.
std::vector<std::vector<EvalRecord>> evaluate_all(const SearchSpace& space,
                                                  const std::vector<std::vector<std::size_t>>& proposals,
                                                  const std::vector<std::uint64_t>& seeds, const Evaluator& evaluate,
                                                  std::size_t workers) {
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  std::vector<std::vector<EvalRecord>> out(seeds.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    out[s].resize(proposals[s].size());
    for (std::size_t k = 0; k < proposals[s].size(); ++k) jobs.emplace_back(s, k);
  }
  run_jobs(jobs.size(), workers, [&](std::size_t j) {
    const auto [s, k] = jobs[j];
    out[s][k] = evaluate(space.config(proposals[s][k]), seeds[s]);
  });
  return out;
}

SearchReport assemble(const std::string& method, const std::string& problem, const std::vector<std::uint64_t>& seeds,
                      const std::vector<std::vector<EvalRecord>>& records) {
  SearchReport report;
  report.method = method;
  report.problem = problem;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    std::vector<const EvalRecord*> ptrs;
    for (const auto& r : records[s]) ptrs.push_back(&r);
    report.seeds.push_back(seed_result(seeds[s], ptrs));
  }
  finalize(report);
  return report;
}

}  // namespace

ArchitectureSpec SearchSpace::config(std::size_t index) const {
  if (index >= size()) throw ConfigError("search space index out of range");
  return ArchitectureSpec::even(static_cast<int>(index / max_depth) + 1, index % max_depth + 1);
}

std::size_t SearchReport::failed_seeds() const {
  return static_cast<std::size_t>(std::count_if(seeds.begin(), seeds.end(), [](const SeedResult& s) { return s.failed; }));
}

std::vector<std::uint64_t> SearchReport::seed_list() const {
  std::vector<std::uint64_t> out;
  for (const auto& s : seeds) out.push_back(s.seed);
  return out;
}

void finalize(SearchReport& report) {
  std::vector<double> errors;
  for (const auto& s : report.seeds)
    if (!s.failed) errors.push_back(s.relative_l2);
  report.mean_error = errors.empty() ? std::numeric_limits<double>::quiet_NaN() : mean(errors);
}

double error_ratio(const SearchReport& report, const SearchReport& grid) {
  if (report.problem != grid.problem) throw ConfigError("error_ratio: reports are for different problems");
  if (report.seed_list() != grid.seed_list()) throw ConfigError("error_ratio: reports use different seeds");
  return 100.0 * report.mean_error / grid.mean_error;
}

GridResult grid_search(const SearchSpace& space, const std::vector<std::uint64_t>& seeds, const Evaluator& evaluate,
                       const std::string& problem, std::size_t workers) {
  const auto start = Clock::now();
  const std::size_t n = space.size(), ns = seeds.size();
  GridResult g;
  g.records.resize(n * ns);
  run_jobs(n * ns, workers, [&](std::size_t j) { g.records[j] = evaluate(space.config(j / ns), seeds[j % ns]); });

  g.report.method = "grid";
  g.report.problem = problem;
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<const EvalRecord*> ptrs;
    for (std::size_t c = 0; c < n; ++c) ptrs.push_back(&g.records[c * ns + s]);
    g.report.seeds.push_back(seed_result(seeds[s], ptrs));
  }
  finalize(g.report);

  g.mean_error.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::size_t best = n;
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> errs;
    for (std::size_t s = 0; s < ns; ++s)
      if (!g.records[c * ns + s].failed) errs.push_back(g.records[c * ns + s].relative_l2);
    if (errs.empty()) continue;
    g.mean_error[c] = mean(errs);
    if (best == n || g.mean_error[c] < g.mean_error[best]) best = c;
  }
  if (best < n) g.best_average = space.config(best);
  g.report.wall_seconds = seconds_since(start);
  return g;
}

std::vector<std::size_t> random_proposals(const SearchSpace& space, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k > space.size()) throw ConfigError("random search needs 1 <= k <= " + std::to_string(space.size()));
  std::vector<std::size_t> remaining(space.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  Rng rng(seed, "baseline-sampler");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < k; ++i) {
    const auto pick = rng.below(remaining.size());
    out.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

SearchReport random_search(const SearchSpace& space, const std::vector<std::uint64_t>& seeds, std::size_t k,
                           const Evaluator& evaluate, const std::string& problem, std::size_t workers) {
  const auto start = Clock::now();
  std::vector<std::vector<std::size_t>> proposals;
  for (auto seed : seeds) proposals.push_back(random_proposals(space, k, seed));
  auto report = assemble("random-k" + std::to_string(k), problem, seeds,
                         evaluate_all(space, proposals, seeds, evaluate, workers));
  report.wall_seconds = seconds_since(start);
  return report;
}

std::vector<std::size_t> tpe_proposals(const SearchSpace& space, std::size_t k, std::uint64_t seed,
                                       const std::function<double(std::size_t)>& loss, const TpeConfig& config) {
  if (k < 1 || k > space.size()) throw ConfigError("TPE search needs 1 <= k <= " + std::to_string(space.size()));
  if (!(config.gamma > 0.0 && config.gamma <= 1.0) || config.candidates == 0)
    throw ConfigError("TPE needs 0 < gamma <= 1 and at least one candidate");
  const std::size_t depths = space.max_depth;
  std::vector<std::size_t> remaining(space.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  // Startup draws consume the same stream as random search.
  Rng rng(seed, "baseline-sampler");
  std::vector<std::size_t> chosen;
  std::vector<double> losses;
  auto take = [&](std::size_t config) {
    remaining.erase(std::find(remaining.begin(), remaining.end(), config));
    chosen.push_back(config);
    losses.push_back(loss(config));
  };
  const std::size_t startup = std::min(k, std::max<std::size_t>(config.startup, 1));
  for (std::size_t i = 0; i < startup; ++i) take(remaining[rng.below(remaining.size())]);

  Rng model_rng(seed, "tpe-model");
  while (chosen.size() < k) {
    const std::size_t n = chosen.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });
    const bool flat = losses[order.front()] == losses[order.back()];
    const std::size_t n_good = flat ? n : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(config.gamma * static_cast<double>(n))));

    // Add-one smoothed categorical densities over width code and depth.
    auto density = [&](std::size_t first, std::size_t last) {
      std::vector<double> w(4, 1.0), d(depths, 1.0);
      for (std::size_t i = first; i < last; ++i) {
        const std::size_t c = chosen[order[i]];
        w[c / depths] += 1.0;
        d[c % depths] += 1.0;
      }
      const double count = static_cast<double>(last - first);
      for (double& x : w) x /= count + 4.0;
      for (double& x : d) x /= count + static_cast<double>(depths);
      return std::pair{w, d};
    };
    const auto [lw, ld] = density(0, n_good);
    const auto [gw, gd] = flat ? density(0, n) : density(n_good, n);

    auto sample = [&](const std::vector<double>& p) {
      double u = model_rng.uniform(), acc = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return i;
      }
      return p.size() - 1;
    };
    std::size_t best = space.size();
    double best_score = -1.0;
    for (std::size_t c = 0; c < config.candidates; ++c) {
      const std::size_t w = sample(lw), d = sample(ld);
      const std::size_t cfg = w * depths + d;
      if (std::find(remaining.begin(), remaining.end(), cfg) == remaining.end()) continue;
      const double score = (lw[w] * ld[d]) / (gw[w] * gd[d]);
      if (score > best_score) {
        best_score = score;
        best = cfg;
      }
    }
    if (best == space.size()) best = remaining[model_rng.below(remaining.size())];
    take(best);
  }
  return chosen;
}

SearchReport tpe_search(const SearchSpace& space, const std::vector<std::uint64_t>& seeds, std::size_t k,
                        const Evaluator& evaluate, const std::string& problem, const TpeConfig& config,
                        std::size_t workers) {
  const auto start = Clock::now();
  // Proposals depend on earlier results, so each seed runs sequentially;
  // seeds are independent and share the pool.
  std::vector<std::vector<EvalRecord>> records(seeds.size());
  run_jobs(seeds.size(), workers, [&](std::size_t s) {
    tpe_proposals(space, k, seeds[s], [&](std::size_t cfg) {
      records[s].push_back(evaluate(space.config(cfg), seeds[s]));
      const auto& r = records[s].back();
      return r.failed ? std::numeric_limits<double>::max() : r.relative_l2;
    }, config);
  });
  auto report = assemble("bayes-k" + std::to_string(k), problem, seeds, records);
  report.wall_seconds = seconds_since(start);
  return report;
}

std::string_view to_string(DartsVariant variant) {
  switch (variant) {
    case DartsVariant::darts:
      return "darts";
    case DartsVariant::darts_plus:
      return "darts+";
    case DartsVariant::sdarts:
      return "sdarts";
    case DartsVariant::sdarts_plus:
      return "sdarts+";
  }
  return "?";
}

DartsVariant parse_darts_variant(std::string_view name) {
  for (auto v : {DartsVariant::darts, DartsVariant::darts_plus, DartsVariant::sdarts, DartsVariant::sdarts_plus})
    if (name == to_string(v)) return v;
  throw ConfigError("unknown DARTS variant '" + std::string(name) + "'");
}

MixtureMode mixture_mode(DartsVariant variant) {
  return variant == DartsVariant::sdarts || variant == DartsVariant::sdarts_plus ? MixtureMode::sigmoid
                                                                                  : MixtureMode::softmax;
}

bool uses_early_stop(DartsVariant variant) {
  return variant == DartsVariant::darts_plus || variant == DartsVariant::sdarts_plus;
}

Evaluator make_evaluator(const ProblemSetup& setup) {
  return [&setup](const ArchitectureSpec& spec, std::uint64_t seed) {
    const auto start = Clock::now();
    EvalRecord r;
    r.spec = spec;
    r.seed = seed;
    try {
      auto out = eval_phase(spec, setup.widths, setup.activation, setup.problem, setup.train, setup.test,
                            setup.reference, setup.eval, seed, setup.execution);
      r.test_loss = out.test_loss.total;
      r.relative_l2 = out.relative_l2;
      r.prediction = out.network.predict(setup.test.points);
    } catch (const NumericalError& e) {
      r.failed = true;
      r.error = e.what();
    }
    r.seconds = seconds_since(start);
    return r;
  };
}

SearchReport darts_search(const ProblemSetup& setup, DartsVariant variant, const std::vector<std::uint64_t>& seeds,
                          std::size_t workers, const DartsObserver& observer) {
  const auto start = Clock::now();
  SearchReport report;
  report.method = std::string(to_string(variant));
  report.problem = setup.problem.name();
  report.seeds.resize(seeds.size());
  SearchPhaseConfig search = setup.search;
  search.early_stop = uses_early_stop(variant);
  std::mutex observer_mutex;
  run_jobs(seeds.size(), workers, [&](std::size_t s) {
    SeedResult& r = report.seeds[s];
    r.seed = seeds[s];
    r.evaluations = 1;
    try {
      SupernetConfig cfg{setup.problem.domain().lo.size(), setup.widths, setup.max_depth, setup.activation,
                         mixture_mode(variant)};
      auto phase_start = Clock::now();
      auto net = MixedNetwork::initialized(cfg, seeds[s]);
      const auto outcome = search_phase(net, setup.problem, setup.train, setup.test.samples, search, setup.execution);
      r.search_seconds = seconds_since(phase_start);
      phase_start = Clock::now();
      r.search_iterations = outcome.iterations;
      r.stop_reason = std::string(to_string(outcome.reason));
      r.spec = outcome.selection.spec;
      const auto eval = eval_phase(r.spec, setup.widths, setup.activation, setup.problem, setup.train, setup.test,
                                   setup.reference, setup.eval, seeds[s], setup.execution);
      r.test_loss = eval.test_loss.total;
      r.relative_l2 = eval.relative_l2;
      r.prediction = eval.network.predict(setup.test.points);
      r.eval_seconds = seconds_since(phase_start);
      if (observer) {
        std::lock_guard lock(observer_mutex);
        observer({seeds[s], &outcome, &eval});
      }
    } catch (const NumericalError& e) {
      r.failed = true;
      r.error = e.what();
    }
  });
  finalize(report);
  report.wall_seconds = seconds_since(start);
  return report;
}

}  // namespace pinndarts
