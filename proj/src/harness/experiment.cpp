#include "pinndarts/harness/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "pinndarts/error.hpp"

namespace pinndarts {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

// Rejects keys outside `allowed` so typos never pass silently.
void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  check(obj.is_object(), where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    check(known, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + std::string(key) + "' in " + where);
  }
}

template <class T>
void maybe(const json& obj, const char* key, T& out, const std::string& where) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

double alpha_lr(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::wave:
      return 5e-2;
    case ProblemKind::burgers:
      return 2e-2;
    default:
      return 2e-1;
  }
}

Activation default_activation(ProblemKind kind) {
  return kind == ProblemKind::wave || kind == ProblemKind::burgers ? Activation::swish : Activation::tanh;
}

bool is_darts(const std::string& method) {
  return method == "darts" || method == "darts+" || method == "sdarts" || method == "sdarts+";
}

// k of "random-k<k>" / "bayes-k<k>", or 0 when `method` has another form.
std::size_t baseline_k(const std::string& method, const std::string& prefix) {
  if (method.rfind(prefix, 0) != 0) return 0;
  const std::string digits = method.substr(prefix.size());
  if (digits.empty() || digits.size() > 3 || digits.find_first_not_of("0123456789") != std::string::npos) return 0;
  return static_cast<std::size_t>(std::stoul(digits));
}

void check_method(const std::string& method, std::size_t space_size) {
  if (method == "grid" || method == "correlation" || is_darts(method)) return;
  for (const char* prefix : {"random-k", "bayes-k"}) {
    if (const auto k = baseline_k(method, prefix)) {
      check(k <= space_size, "method '" + method + "' asks for more configurations than the space holds (" +
                                 std::to_string(space_size) + ")");
      return;
    }
  }
  throw ConfigError("config: unknown method '" + method + "'");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content, std::vector<fs::path>& files) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  files.push_back(path);
}

// eval_phase results keyed by (spec, seed). Training is deterministic for a
// fixed setup, so methods that revisit a configuration reuse the record
// (including its measured time).
class MemoEvaluator {
 public:
  explicit MemoEvaluator(Evaluator inner) : inner_(std::move(inner)) {}

  EvalRecord operator()(const ArchitectureSpec& spec, std::uint64_t seed) {
    const auto key = std::make_pair(spec.to_string(), seed);
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    auto record = inner_(spec, seed);
    std::lock_guard lock(mutex_);
    return cache_.emplace(key, std::move(record)).first->second;
  }

 private:
  Evaluator inner_;
  std::mutex mutex_;
  std::map<std::pair<std::string, std::uint64_t>, EvalRecord> cache_;
};

json allocation_json(const ExperimentConfig& c) {
  const auto problem = PdeProblem::make(c.problem, c.variant);
  json j{{"interior", c.samples.interior}, {"boundary", c.samples.boundary}};
  if (problem.time_dependent()) j["initial"] = c.samples.initial;
  if (problem.has_velocity_condition()) j["initial_velocity"] = "co-located with initial";
  return j;
}

}  // namespace

ExperimentConfig profile_defaults(const std::string& profile, ProblemKind problem, Variant variant) {
  ExperimentConfig c;
  c.profile = profile;
  c.problem = problem;
  c.variant = variant;
  const auto pde = PdeProblem::make(problem, variant);
  c.activation = default_activation(problem);
  c.search.alpha_lr = alpha_lr(problem);
  if (profile == "full") {
    c.widths = WidthTable::full();
    c.max_depth = 8;
    c.samples = {problem == ProblemKind::burgers ? 10000u : 5000u, 200, pde.time_dependent() ? 200u : 0u};
    c.test_grid = default_grid_shape(problem);
  } else if (profile == "small") {
    c.widths = WidthTable::small();
    c.max_depth = 4;
    c.samples = {500, 100, pde.time_dependent() ? 100u : 0u};
    c.test_grid = {40, 40};
    c.eval.iterations = 2000;
    c.eval.lr_initial = 5e-3;
    c.eval.lr_final = 1e-4;
    c.search.max_iterations = 1000;
    c.search.weight_lr = 1e-3;
    c.search.stability_window = 50;
  } else {
    throw ConfigError("config: unknown profile '" + profile + "' (expected full or small)");
  }
  c.reference.output = c.test_grid;
  return c;
}

ExperimentConfig parse_config(const json& doc) {
  only_keys(doc, "config",
            {"format", "profile", "problem", "variant", "methods", "seeds", "sample_seed", "samples", "test_grid",
             "widths", "max_depth", "activation", "eval", "search", "loss_weights", "tpe", "reference", "execution",
             "workers", "output_dir", "cache_dir"});
  if (doc.contains("format"))
    check(get<int>(doc, "format", "config") == kConfigFormatVersion,
          "unsupported format version (expected " + std::to_string(kConfigFormatVersion) + ")");
  check(doc.contains("problem"), "missing required key 'problem'");
  const auto problem = parse_problem_kind(get<std::string>(doc, "problem", "config"));
  const auto variant =
      doc.contains("variant") ? parse_variant(get<std::string>(doc, "variant", "config")) : Variant::simple;
  auto c = profile_defaults(doc.contains("profile") ? get<std::string>(doc, "profile", "config") : "full", problem,
                            variant);

  maybe(doc, "methods", c.methods, "config");
  maybe(doc, "seeds", c.seeds, "config");
  maybe(doc, "sample_seed", c.sample_seed, "config");
  if (doc.contains("samples")) {
    const auto& s = doc["samples"];
    only_keys(s, "samples", {"interior", "boundary", "initial"});
    maybe(s, "interior", c.samples.interior, "samples");
    maybe(s, "boundary", c.samples.boundary, "samples");
    maybe(s, "initial", c.samples.initial, "samples");
  }
  if (doc.contains("test_grid")) {
    const auto g = get<std::vector<std::size_t>>(doc, "test_grid", "config");
    check(g.size() == 2, "test_grid must be [nx, ny]");
    c.test_grid = {g[0], g[1]};
    c.reference.output = c.test_grid;
  }
  if (doc.contains("widths")) {
    const auto w = get<std::vector<std::size_t>>(doc, "widths", "config");
    check(w.size() == 4, "widths must list exactly four neuron counts");
    c.widths = WidthTable{{w[0], w[1], w[2], w[3]}};
  }
  maybe(doc, "max_depth", c.max_depth, "config");
  if (doc.contains("activation")) c.activation = parse_activation(get<std::string>(doc, "activation", "config"));
  if (doc.contains("eval")) {
    const auto& e = doc["eval"];
    only_keys(e, "eval", {"iterations", "lr_initial", "lr_final"});
    maybe(e, "iterations", c.eval.iterations, "eval");
    maybe(e, "lr_initial", c.eval.lr_initial, "eval");
    maybe(e, "lr_final", c.eval.lr_final, "eval");
  }
  if (doc.contains("search")) {
    const auto& s = doc["search"];
    only_keys(s, "search", {"max_iterations", "alpha_lr", "weight_lr", "stability_window", "skip_threshold"});
    maybe(s, "max_iterations", c.search.max_iterations, "search");
    maybe(s, "alpha_lr", c.search.alpha_lr, "search");
    maybe(s, "weight_lr", c.search.weight_lr, "search");
    maybe(s, "stability_window", c.search.stability_window, "search");
    maybe(s, "skip_threshold", c.search.skip_threshold, "search");
  }
  if (doc.contains("loss_weights")) {
    const auto& w = doc["loss_weights"];
    only_keys(w, "loss_weights", {"pde", "bc", "ic"});
    maybe(w, "pde", c.eval.weights.pde, "loss_weights");
    maybe(w, "bc", c.eval.weights.bc, "loss_weights");
    maybe(w, "ic", c.eval.weights.ic, "loss_weights");
    c.search.weights = c.eval.weights;
  }
  if (doc.contains("tpe")) {
    const auto& t = doc["tpe"];
    only_keys(t, "tpe", {"gamma", "startup", "candidates"});
    maybe(t, "gamma", c.tpe.gamma, "tpe");
    maybe(t, "startup", c.tpe.startup, "tpe");
    maybe(t, "candidates", c.tpe.candidates, "tpe");
  }
  if (doc.contains("reference")) {
    const auto& r = doc["reference"];
    only_keys(r, "reference", {"n", "dt", "courant", "map_eps", "build"});
    maybe(r, "n", c.reference.n, "reference");
    maybe(r, "dt", c.reference.dt, "reference");
    maybe(r, "courant", c.reference.courant, "reference");
    maybe(r, "map_eps", c.reference.map_eps, "reference");
    maybe(r, "build", c.build_reference, "reference");
  }
  if (doc.contains("execution")) {
    const auto e = get<std::string>(doc, "execution", "config");
    check(e == "serial" || e == "parallel", "execution must be serial or parallel");
    c.execution = e == "serial" ? Execution::serial : Execution::parallel;
  }
  maybe(doc, "workers", c.workers, "config");
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir", "config");
  if (doc.contains("cache_dir")) c.cache_dir = get<std::string>(doc, "cache_dir", "config");
  validate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate(const ExperimentConfig& c) {
  const auto problem = PdeProblem::make(c.problem, c.variant);
  check(c.max_depth >= 1 && c.max_depth <= 8, "max_depth must be in 1..8");
  const SearchSpace space{c.max_depth};
  check(!c.methods.empty(), "methods must not be empty");
  std::set<std::string> methods;
  for (const auto& m : c.methods) {
    check_method(m, space.size());
    check(methods.insert(m).second, "method '" + m + "' listed twice");
  }
  check(!c.seeds.empty(), "seeds must not be empty");
  check(std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() == c.seeds.size(), "seeds must be distinct");
  check(c.samples.interior > 0 && c.samples.boundary > 0, "interior and boundary sample counts must be positive");
  check(!problem.time_dependent() || c.samples.initial > 0, "time-dependent problems need initial samples");
  check(c.test_grid.nx >= 2 && c.test_grid.ny >= 2, "test_grid needs at least 2 points per axis");
  for (auto w : c.widths.widths) check(w > 0, "widths must be positive");
  check(c.eval.iterations >= 2, "eval.iterations must be at least 2");
  check(c.eval.lr_initial >= c.eval.lr_final && c.eval.lr_final > 0, "need eval.lr_initial >= eval.lr_final > 0");
  check(c.search.max_iterations >= 1, "search.max_iterations must be positive");
  check(c.search.alpha_lr > 0 && c.search.weight_lr > 0, "search learning rates must be positive");
  check(c.search.stability_window >= 1 && c.search.skip_threshold >= 1,
        "search.stability_window and search.skip_threshold must be positive");
  check(c.tpe.gamma > 0 && c.tpe.gamma <= 1 && c.tpe.candidates >= 1, "need 0 < tpe.gamma <= 1, tpe.candidates >= 1");
  check(c.eval.weights.pde >= 0 && c.eval.weights.bc >= 0 && c.eval.weights.ic >= 0,
        "loss weights must be non-negative");
  check(c.workers >= 1, "workers must be positive");
  if (c.problem == ProblemKind::burgers) {
    check(c.reference.n >= 64, "reference.n must be at least 64");
    check(c.reference.courant > 0 && c.reference.dt >= 0 && c.reference.map_eps > 0,
          "reference.courant and reference.map_eps must be positive, reference.dt non-negative");
  }
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["format"] = kConfigFormatVersion;
  j["profile"] = c.profile;
  j["problem"] = std::string(to_string(c.problem));
  j["variant"] = std::string(to_string(c.variant));
  j["methods"] = c.methods;
  j["seeds"] = c.seeds;
  j["sample_seed"] = c.sample_seed;
  j["samples"] = {{"interior", c.samples.interior}, {"boundary", c.samples.boundary}, {"initial", c.samples.initial}};
  j["test_grid"] = {c.test_grid.nx, c.test_grid.ny};
  j["widths"] = c.widths.widths;
  j["max_depth"] = c.max_depth;
  j["activation"] = std::string(to_string(c.activation));
  j["eval"] = {{"iterations", c.eval.iterations}, {"lr_initial", c.eval.lr_initial}, {"lr_final", c.eval.lr_final}};
  j["search"] = {{"max_iterations", c.search.max_iterations},
                 {"alpha_lr", c.search.alpha_lr},
                 {"weight_lr", c.search.weight_lr},
                 {"stability_window", c.search.stability_window},
                 {"skip_threshold", c.search.skip_threshold}};
  j["loss_weights"] = {{"pde", c.eval.weights.pde}, {"bc", c.eval.weights.bc}, {"ic", c.eval.weights.ic}};
  j["tpe"] = {{"gamma", c.tpe.gamma}, {"startup", c.tpe.startup}, {"candidates", c.tpe.candidates}};
  if (c.problem == ProblemKind::burgers)
    j["reference"] = {{"n", c.reference.n},
                      {"dt", c.reference.dt},
                      {"courant", c.reference.courant},
                      {"map_eps", c.reference.map_eps}};
  j["execution"] = c.execution == Execution::serial ? "serial" : "parallel";
  return j;
}

std::string config_hash(const ExperimentConfig& config) {
  return content_hash(config_to_json(config).dump());
}

ProblemSetup make_setup(const ExperimentConfig& c) {
  ProblemSetup s;
  s.problem = PdeProblem::make(c.problem, c.variant);
  s.train = sample_training(s.problem, c.samples, c.sample_seed);
  s.test = test_grid(s.problem, c.test_grid);
  if (s.problem.has_exact_solution()) {
    s.reference = exact_field(s.problem, s.test.points);
  } else {
    auto ref_cfg = c.reference;
    ref_cfg.output = c.test_grid;
    ref_cfg.t_end = s.problem.domain().hi[1];
    s.reference = load_reference(c.cache_dir.empty() ? default_cache_dir() : c.cache_dir, ref_cfg, c.build_reference)
                      .values;
  }
  s.widths = c.widths;
  s.max_depth = c.max_depth;
  s.activation = c.activation;
  s.eval = c.eval;
  s.search = c.search;
  s.search.weights = c.eval.weights;
  s.execution = c.execution;
  return s;
}

double mean_seconds_per_seed(const MethodTimes& t) {
  if (t.seeds.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < t.seeds.size(); ++i) total += t.search_seconds[i] + t.eval_seconds[i];
  return total / static_cast<double>(t.seeds.size());
}

std::vector<fs::path> emit_solution_dump(const fs::path& dir, const TestGrid& grid, std::span<const double> reference,
                                         std::span<const double> prediction, const ArtifactMeta& meta) {
  const std::size_t n = grid.shape.size();
  if (reference.size() != n || prediction.size() != n)
    throw DimensionError("emit_solution_dump: field sizes do not match the test grid");
  std::vector<fs::path> files;
  const std::pair<const char*, int> kinds[] = {{"reference", 0}, {"prediction", 1}, {"error", 2}};
  for (const auto& [name, kind] : kinds) {
    std::ostringstream out;
    write_csv_preamble(out, meta, std::string("field-") + name, 1);
    out << "i,j,x,y,value\n";
    for (std::size_t j = 0; j < grid.shape.ny; ++j) {
      for (std::size_t i = 0; i < grid.shape.nx; ++i) {
        const std::size_t p = j * grid.shape.nx + i;
        const double v = kind == 0 ? reference[p] : kind == 1 ? prediction[p] : std::abs(reference[p] - prediction[p]);
        out << i << ',' << j << ',' << fmt(grid.points[p][0]) << ',' << fmt(grid.points[p][1]) << ',' << fmt(v) << '\n';
      }
    }
    write_file(dir / (std::string(name) + ".csv"), out.str(), files);
  }
  return files;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto setup = make_setup(config);
  const ArtifactMeta meta{config_hash(config)};
  const SearchSpace space{config.max_depth};
  const fs::path out_dir = config.output_dir;
  const std::string problem = setup.problem.name();

  json context{{"config", config_to_json(config)},
               {"config_hash", meta.config_hash},
               {"library_version", std::string(kLibraryVersion)},
               {"report_format", kReportFormatVersion},
               {"sample_allocation", allocation_json(config)}};

  auto memo = std::make_shared<MemoEvaluator>(make_evaluator(setup));
  const Evaluator evaluate = [memo](const ArchitectureSpec& spec, std::uint64_t seed) { return (*memo)(spec, seed); };

  ExperimentResult result;
  struct Pending {
    std::string path;
    std::string content;
  };
  std::vector<Pending> pending;  // written after all methods finish, by this thread only
  auto add = [&](const fs::path& rel, std::string content) { pending.push_back({rel.string(), std::move(content)}); };

  for (const auto& method : config.methods) {
    if (method == "correlation") {
      std::vector<int> codes{1, 2, 3, 4};
      std::vector<std::size_t> depths;
      for (std::size_t d = 1; d <= config.max_depth; ++d) depths.push_back(d);
      auto study = correlation_study(codes, depths, config.seeds, evaluate, config.workers);
      std::ostringstream scatter;
      write_scatter_csv(scatter, study, meta);
      add("correlation.csv", scatter.str());
      json j = context;
      j["method"] = "correlation";
      j["coefficient"] = study.coefficient;
      j["pairs"] = study.records.size();
      add(fs::path("reports") / "correlation.json", j.dump(2) + "\n");
      result.correlation = std::move(study);
      continue;
    }

    SearchReport report;
    if (method == "grid") {
      auto g = grid_search(space, config.seeds, evaluate, problem, config.workers);
      std::ostringstream heat;
      write_heatmap_csv(heat, space, config.widths, g.mean_error, meta);
      add("heatmap.csv", heat.str());
      report = g.report;
      result.grid = std::move(g);
    } else if (const auto k = baseline_k(method, "random-k")) {
      report = random_search(space, config.seeds, k, evaluate, problem, config.workers);
    } else if (const auto kb = baseline_k(method, "bayes-k")) {
      report = tpe_search(space, config.seeds, kb, evaluate, problem, config.tpe, config.workers);
    } else {
      const auto variant = parse_darts_variant(method);
      std::optional<std::pair<double, std::string>> best_checkpoint;
      report = darts_search(setup, variant, config.seeds, config.workers, [&](const DartsSeedArtifacts& a) {
        std::ostringstream alpha;
        write_alpha_trajectory_csv(alpha, a.search->alpha_trajectory, meta);
        add(fs::path("alpha") / (method + "-seed" + std::to_string(a.seed) + ".csv"), alpha.str());
        const double err = a.eval->relative_l2;
        if (!best_checkpoint || err < best_checkpoint->first) {
          std::ostringstream ck;
          save_checkpoint(ck, a.eval->network, a.search->selection.spec);
          best_checkpoint = {err, ck.str()};
        }
      });
      if (best_checkpoint) add(fs::path("checkpoints") / (method + ".txt"), best_checkpoint->second);
    }

    std::ostringstream js, csv;
    write_report_json(js, report, context);
    write_report_csv(csv, report, meta);
    add(fs::path("reports") / (method + ".json"), js.str());
    add(fs::path("reports") / (method + ".csv"), csv.str());

    const SeedResult* best = nullptr;
    for (const auto& s : report.seeds)
      if (!s.failed && !s.prediction.empty() && (!best || s.relative_l2 < best->relative_l2)) best = &s;
    if (best) {
      for (auto& f : emit_solution_dump(out_dir / "fields" / method, setup.test, setup.reference, best->prediction,
                                        meta))
        result.files.push_back(f);
    }

    MethodTimes times{method, {}, {}, {}};
    for (const auto& s : report.seeds) {
      times.seeds.push_back(s.seed);
      times.search_seconds.push_back(s.search_seconds);
      times.eval_seconds.push_back(s.eval_seconds);
    }
    result.all_seeds_failed = result.all_seeds_failed || report.failed_seeds() == report.seeds.size();
    result.times.push_back(std::move(times));
    result.reports.push_back(std::move(report));
  }

  const SearchReport* grid = result.grid ? &result.grid->report : nullptr;
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    ComparisonRow row;
    row.method = r.method;
    row.mean_error = r.mean_error;
    row.seconds = mean_seconds_per_seed(result.times[i]);
    row.error_ratio = grid ? error_ratio(r, *grid) : std::numeric_limits<double>::quiet_NaN();
    row.failed_seeds = r.failed_seeds();
    result.comparison.push_back(row);
  }
  if (!result.reports.empty()) {
    std::ostringstream cmp;
    write_comparison_csv(cmp, result.comparison, meta);
    add("comparison.csv", cmp.str());
    std::ostringstream t;
    write_csv_preamble(t, meta, "timings", 1);
    t << "method,seed,search_seconds,eval_seconds,total_seconds\n";
    for (const auto& m : result.times)
      for (std::size_t s = 0; s < m.seeds.size(); ++s)
        t << m.method << ',' << m.seeds[s] << ',' << fmt(m.search_seconds[s]) << ',' << fmt(m.eval_seconds[s]) << ','
          << fmt(m.search_seconds[s] + m.eval_seconds[s]) << '\n';
    add("timings.csv", t.str());
  }
  {
    std::ostringstream samples;
    write_samples_csv(samples, setup.train, meta);
    add("samples.csv", samples.str());
  }
  for (auto& p : pending) write_file(out_dir / p.path, p.content, result.files);
  return result;
}

}  // namespace pinndarts
