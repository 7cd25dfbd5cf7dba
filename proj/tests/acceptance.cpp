// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,4] [--skip 5] [--out DIR]
//
// Criterion 5 trains two full-scale networks for 10000 iterations each
// (about 22 hours on one core); the ctest entry skips it and a separate,
// normally disabled entry runs it alone.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pinndarts/harness/experiment.hpp"
#include "pinndarts/metrics/metrics.hpp"
#include "pinndarts/supernet/mixed_network.hpp"
#include "support.hpp"

using namespace pinndarts;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fixed(double v, int digits = 1) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

fs::path g_out = fs::temp_directory_path() / "pinndarts-acceptance";

std::vector<double> values(const DifferentiableNetwork& net, const PointSet& pts) {
  std::vector<double> u;
  for (const auto& j : evaluate_batch(net, pts, DerivativeRequest::value_only(), Execution::serial)) u.push_back(j.u);
  return u;
}

// 1. Parameter gradients of full PINN losses against central differences.
Outcome gradient_oracle() {
  const std::vector<PdeProblem> problems{PdeProblem::poisson(Variant::simple), PdeProblem::heat(Variant::simple),
                                         PdeProblem::wave(Variant::simple), PdeProblem::burgers()};
  Rng rng(17, "acceptance-gradients");
  double worst = 0.0;
  std::size_t nets = 0, checked = 0;
  for (std::size_t trial = 0; trial < 24; ++trial) {
    const auto& problem = problems[trial % problems.size()];
    const Activation act = (trial / 4) % 2 ? Activation::swish : Activation::tanh;
    const std::size_t depth = 1 + rng.below(4);
    std::vector<std::size_t> widths;
    for (std::size_t l = 0; l < depth; ++l) widths.push_back(2 + rng.below(15));
    Fnn net = testing::random_fnn(2, widths, act, 500 + trial, 0.7);
    const auto samples = sample_training(problem, {5, 5, 5}, 600 + trial);
    std::vector<double> grad(net.parameter_count(), 0.0);
    pinn_loss_gradient(net, problem, samples, {}, grad, GradientScope::all(), Execution::serial);
    const auto loss = [&] { return pinn_loss(net, problem, samples, {}, Execution::serial).total; };
    // Richardson-extrapolated central differences: error O(h^4).
    const auto coarse = testing::fd_gradient(loss, net.mutable_parameters(), 2e-3);
    const auto fine = testing::fd_gradient(loss, net.mutable_parameters(), 1e-3);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double fd = (4.0 * fine[i] - coarse[i]) / 3.0;
      worst = std::max(worst, testing::relative_error(grad[i], fd));
    }
    checked += grad.size();
    ++nets;
  }
  return {worst < 1e-5, std::to_string(nets) + " networks, " + std::to_string(checked) +
                            " parameters, worst relative error " + sci(worst) + " (bound 1e-5)"};
}

// 2. Residuals of the closed-form solutions through the Taylor primitives.
Outcome exact_residuals() {
  double worst = 0.0;
  std::size_t count = 0;
  for (auto kind : {ProblemKind::poisson, ProblemKind::heat, ProblemKind::wave}) {
    for (auto variant : {Variant::simple, Variant::complex}) {
      const auto problem = PdeProblem::make(kind, variant);
      const Box& b = problem.domain();
      Rng rng(23, problem.name());
      for (int i = 0; i < 1000; ++i) {
        const std::array p{rng.uniform(b.lo[0], b.hi[0]), rng.uniform(b.lo[1], b.hi[1])};
        worst = std::max(worst, std::abs(problem.residual(p, problem.exact_jet(p, problem.residual_request()))));
      }
      ++count;
    }
  }
  return {worst < 1e-8, std::to_string(count) + " solutions x 1000 points, max |residual| " + sci(worst) +
                            " (bound 1e-8)"};
}

// 3. One-hot supernet against the extracted compact network.
Outcome one_hot_equivalence() {
  Rng rng(31, "acceptance-specs");
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    ArchitectureSpec spec;
    const std::size_t depth = rng.below(9);
    for (std::size_t i = 0; i < depth; ++i) spec.codes.push_back(1 + static_cast<int>(rng.below(4)));
    const SupernetConfig cfg{2, WidthTable::full(), 8, t % 2 ? Activation::swish : Activation::tanh,
                             t % 3 ? MixtureMode::softmax : MixtureMode::sigmoid};
    auto net = MixedNetwork::initialized(cfg, 40 + t);
    net.set_alpha(AlphaMatrix::one_hot(spec, 8));
    const auto compact = extract_compact_fnn(net, discretize(net.alpha()));
    if (!(discretize(net.alpha()).spec == spec)) return {false, "discretized spec differs for " + spec.to_string()};
    const auto pts = testing::random_points(2, 100, 70 + t, 0.0, 1.0);
    const auto a = values(net, pts), b = values(compact, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return {worst <= 1e-12, "20 specs (widths 100..400, 8 edges) x 100 inputs, max |difference| " + sci(worst) +
                              " (bound 1e-12)"};
}

ExperimentConfig small_config(ProblemKind kind, const std::vector<std::string>& methods,
                              const std::vector<std::uint64_t>& seeds, const std::string& out) {
  auto c = profile_defaults("small", kind, Variant::simple);
  c.methods = methods;
  c.seeds = seeds;
  c.execution = Execution::serial;
  c.output_dir = g_out / out;
  c.cache_dir = g_out / "cache";
  return c;
}

// Criterion 6 runs; criterion 4 reuses the Poisson grid evaluations.
std::map<ProblemKind, ExperimentResult> g_ordering_runs;

// 6. Search quality and cost, small profile.
Outcome search_ordering() {
  int wins = 0;
  bool fast = true;
  std::string detail;
  for (auto kind : {ProblemKind::poisson, ProblemKind::heat, ProblemKind::wave, ProblemKind::burgers}) {
    const auto config = small_config(kind, {"grid", "random-k2", "darts+"}, {1, 2, 3},
                                     "ordering-" + std::string(to_string(kind)));
    auto result = run_experiment(config);
    const auto& rows = result.comparison;
    const double darts_ratio = rows[2].error_ratio, random_ratio = rows[1].error_ratio;
    const double time_ratio = rows[2].seconds / rows[0].seconds;
    const bool ordered = darts_ratio <= random_ratio;
    wins += ordered;
    fast = fast && time_ratio < 0.25;
    detail += std::string(to_string(kind)) + ": darts+ " + fixed(darts_ratio) + "% vs random-k2 " +
              fixed(random_ratio) + "%, time x" + fixed(time_ratio, 3) + "; ";
    g_ordering_runs[kind] = std::move(result);
  }
  detail += "ordering on " + std::to_string(wins) + "/4 (need 3), time below 0.25x grid on all: " +
            (fast ? "yes" : "no");
  return {wins >= 3 && fast, detail};
}

// 4. Loss/error rank correlation, small profile, 4 widths x 4 depths x 2 seeds.
Outcome correlation() {
  const auto config = small_config(ProblemKind::poisson, {"correlation"}, {1, 2}, "correlation");
  const auto setup = make_setup(config);
  const auto fresh = make_evaluator(setup);
  const SearchSpace space{config.max_depth};
  const GridResult* grid = nullptr;
  std::vector<std::uint64_t> grid_seeds;
  if (auto it = g_ordering_runs.find(ProblemKind::poisson); it != g_ordering_runs.end() && it->second.grid) {
    grid = &*it->second.grid;
    grid_seeds = grid->report.seed_list();
  }
  std::size_t reused = 0;
  const Evaluator evaluate = [&](const ArchitectureSpec& spec, std::uint64_t seed) {
    if (grid) {
      const auto s = std::find(grid_seeds.begin(), grid_seeds.end(), seed);
      const std::size_t c = space.index_of(spec.codes.at(0), spec.depth());
      if (s != grid_seeds.end()) {
        ++reused;
        return grid->records[c * grid_seeds.size() + static_cast<std::size_t>(s - grid_seeds.begin())];
      }
    }
    return fresh(spec, seed);
  };
  const auto study = correlation_study({1, 2, 3, 4}, {1, 2, 3, 4}, config.seeds, evaluate);
  std::ostringstream scatter;
  write_scatter_csv(scatter, study, {config_hash(config)});
  fs::create_directories(config.output_dir);
  std::ofstream(config.output_dir / "correlation.csv") << scatter.str();
  return {study.records.size() == 32 && study.coefficient > 0.4,
          std::to_string(study.records.size()) + " pairs (" + std::to_string(reused) +
              " reused from the criterion 6 grid), Spearman " + fixed(study.coefficient, 4) + " (need > 0.4)"};
}

// 5. Full-scale training of two fixed architectures.
Outcome trainability() {
  std::string detail;
  bool pass = true;
  const std::pair<ProblemKind, const char*> runs[] = {{ProblemKind::poisson, "(4,4,4,4,4)"},
                                                      {ProblemKind::heat, "(4,4,4,4,4,4)"}};
  for (const auto& [kind, text] : runs) {
    auto config = profile_defaults("full", kind, Variant::simple);
    config.execution = Execution::serial;
    const auto setup = make_setup(config);
    const auto spec = ArchitectureSpec::parse(text);
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = eval_phase(spec, setup.widths, setup.activation, setup.problem, setup.train, setup.test,
                                setup.reference, setup.eval, 1, setup.execution);
    const double hours = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 3600.0;
    pass = pass && out.relative_l2 < 5e-3;
    detail += setup.problem.name() + " " + text + ": " + sci(out.relative_l2) + " in " + fixed(hours, 2) + " h; ";
  }
  return {pass, detail + "bound 5e-3"};
}

// 7. Early stopping on synthetic alpha trajectories.
Outcome early_stopping() {
  const SearchPhaseConfig cfg;  // window 100, skip threshold 6
  // Feeds alpha(0), alpha(1), ... through the same bookkeeping as the search
  // loop; returns the index of the first alpha that stops the search.
  auto drive = [&](const std::function<AlphaMatrix(std::size_t)>& alpha) {
    std::vector<std::vector<std::uint8_t>> history;
    for (std::size_t t = 0; t < 1000; ++t) {
      const auto a = alpha(t);
      history.push_back(alpha_ranking(a));
      const auto reason = early_stop_check(history, discretize(a).skip_count, cfg);
      if (reason != StopReason::none) return std::pair{t, reason};
    }
    return std::pair{std::size_t{1000}, StopReason::none};
  };
  // The leading candidate of edge 0 rotates until t = 36; from t = 37 on the
  // ranking is frozen, so the 100th identical ranking is alpha(136).
  const auto stable = drive([](std::size_t t) {
    AlphaMatrix a(8);
    for (std::size_t e = 0; e < 8; ++e)
      for (std::size_t c = 0; c < kCandidateCount; ++c) a(e, c) = 0.1 * static_cast<double>(kCandidateCount - c);
    a(0, t < 37 ? t % 4 : 3) = 5.0;
    if (t >= 37) a(1, 2) = 5.0;
    return a;
  });
  // Edges turn to skip one every 10 steps (edge e from t = 10 (e + 1)) while
  // candidates 0 and 1 swap places each step; the 6th skip edge is alpha(60).
  const auto skips = drive([](std::size_t t) {
    AlphaMatrix a(8);
    for (std::size_t e = 0; e < 8; ++e) {
      a(e, t % 2) = 1.0;
      a(e, (t + 1) % 2) = 0.5;
      if (t >= 10 * (e + 1)) a(e, kSkipCandidate) = 2.0;
    }
    return a;
  });
  const bool ok_stable = stable.second == StopReason::ranking_stable && stable.first == 136;
  const bool ok_skip = skips.second == StopReason::skip_threshold && skips.first == 60;
  return {ok_stable && ok_skip, std::string(to_string(stable.second)) + " at alpha(" +
                                    std::to_string(stable.first) + "), expected 136 (first frozen ranking at 37); " +
                                    std::string(to_string(skips.second)) + " at alpha(" +
                                    std::to_string(skips.first) + "), expected 60 (6th skip edge)"};
}

// 8. Burgers reference self-convergence, symmetry, initial and boundary data.
Outcome burgers_reference() {
  const auto t0 = std::chrono::steady_clock::now();
  BurgersSolverConfig c;
  c.n = 128;
  const auto coarse = solve_burgers(c);
  c.n = 256;
  const auto fine = solve_burgers(c);
  const double conv = relative_l2(coarse.values, fine.values);
  const std::size_t nx = fine.shape.nx;
  double sym = 0.0, ic = 0.0, bc = 0.0;
  for (std::size_t j = 0; j < fine.shape.ny; ++j) {
    bc = std::max({bc, std::abs(fine.at(0, j)), std::abs(fine.at(nx - 1, j))});
    for (std::size_t i = 0; i < nx; ++i) sym = std::max(sym, std::abs(fine.at(i, j) + fine.at(nx - 1 - i, j)));
  }
  for (std::size_t i = 0; i < nx; ++i)
    ic = std::max(ic, std::abs(fine.at(i, 0) + std::sin(std::numbers::pi * grid_coordinate(-1, 1, i, nx))));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {conv < 1e-4 && sym < 1e-8 && bc == 0.0 && ic < 1e-12,
          "N=128 vs 256 relative L2 " + sci(conv) + " (bound 1e-4), odd-symmetry " + sci(sym) +
              " (bound 1e-8), boundary max " + sci(bc) + ", initial max error " + sci(ic) + ", " + fixed(secs) +
              " s"};
}

// 9. Baseline invariants on mocked evaluators.
Outcome baseline_invariants() {
  const SearchSpace space;
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  const Evaluator mock = [](const ArchitectureSpec& spec, std::uint64_t seed) {
    EvalRecord r;
    r.spec = spec;
    r.seed = seed;
    r.relative_l2 = 1.5 + std::sin(2.3 * spec.codes[0] + 0.7 * static_cast<double>(spec.depth() * seed));
    return r;
  };
  const auto grid = grid_search(space, seeds, mock, "mock");
  const auto all = random_search(space, seeds, 32, mock, "mock");
  bool same = true;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    std::set<std::string> a, b;
    for (const auto& spec : all.seeds[s].evaluated) a.insert(spec.to_string());
    for (std::size_t c = 0; c < space.size(); ++c) b.insert(space.config(c).to_string());
    same = same && a == b && all.seeds[s].spec == grid.report.seeds[s].spec;
  }
  const auto landscape = [&](std::size_t c) {
    const auto spec = space.config(c);
    const double w = spec.codes[0], d = static_cast<double>(spec.depth());
    return std::abs(w - 4) + 0.5 * std::abs(d - 5);
  };
  const std::size_t target = space.index_of(4, 5);
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto p = tpe_proposals(space, 10, seed, landscape);
    const auto best = *std::min_element(p.begin(), p.end(), [&](auto a, auto b) { return landscape(a) < landscape(b); });
    hits += best == target;
  }
  const double freq = static_cast<double>(hits) / 200.0;
  return {same && freq > 1.0 / 32.0, std::string("random k=32 selections equal grid: ") + (same ? "yes" : "no") +
                                         "; TPE k=10 selects (4,5) in " + std::to_string(hits) +
                                         "/200 seeds (frequency " + fixed(freq, 3) + " vs uniform 0.031)"};
}

// 10. Bit-identical reports from two single-threaded runs.
Outcome reproducibility() {
  std::vector<fs::path> dirs;
  for (const char* name : {"repro-a", "repro-b"}) {
    auto c = small_config(ProblemKind::wave, {"random-k2", "bayes-k2", "darts+"}, {1}, name);
    fs::remove_all(c.output_dir);
    run_experiment(c);
    dirs.push_back(c.output_dir);
  }
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(dirs[0] / "reports")) {
    std::ifstream a(e.path(), std::ios::binary), b(dirs[1] / "reports" / e.path().filename(), std::ios::binary);
    std::ostringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (sa.str() != sb.str() || sa.str().empty()) return {false, e.path().filename().string() + " differs"};
    ++compared;
  }
  return {compared == 6, std::to_string(compared) + " report files identical across two runs (wave, small profile)"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only, skip, known;
  std::string out;
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--skip", skip, "criteria to leave out")->delimiter(',');
  app.add_option("--out", out, "artifact directory");
  // Listed criteria still run and print FAIL; they just do not set the exit code.
  app.add_option("--known-failures", known, "documented failures that do not fail the run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  if (!out.empty()) g_out = out;

  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
  };
  // Execution order: 6 before 4 so the correlation study can reuse the grid runs.
  const std::vector<Criterion> order{
      {1, "gradient oracle", gradient_oracle},
      {2, "residual of exact solutions", exact_residuals},
      {3, "one-hot supernet equivalence", one_hot_equivalence},
      {6, "search-quality ordering, small profile", search_ordering},
      {4, "Spearman correlation, small profile", correlation},
      {5, "trainability, full profile", trainability},
      {7, "early stopping", early_stopping},
      {8, "Burgers reference", burgers_reference},
      {9, "baseline invariants", baseline_invariants},
      {10, "reproducibility, small profile", reproducibility},
  };
  auto selected = [&](int id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) return false;
    return std::find(skip.begin(), skip.end(), id) == skip.end();
  };
  std::map<int, std::string> lines;
  bool all_pass = true;
  for (const auto& c : order) {
    std::string line = "criterion " + std::to_string(c.id) + " [PRIMARY] " + c.title + ": ";
    if (!selected(c.id)) {
      lines[c.id] = line + "SKIPPED (not selected)";
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    line += (o.pass ? "PASS" : "FAIL") + std::string(" | ") + o.detail + " | " + fixed(secs) + " s";
    std::fprintf(stderr, "%s\n", line.c_str());
    lines[c.id] = line;
    const bool excused = std::find(known.begin(), known.end(), c.id) != known.end();
    if (!o.pass && excused) lines[c.id] += " | known failure";
    all_pass = all_pass && (o.pass || excused);
  }
  fs::create_directories(g_out);
  std::ofstream summary(g_out / "summary.txt");
  for (const auto& [id, line] : lines) {
    std::printf("%s\n", line.c_str());
    summary << line << '\n';
  }
  return all_pass ? 0 : 1;
}
