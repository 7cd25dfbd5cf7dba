// Command-line front end. Settings resolve in three layers: profile defaults
// for the problem, then the --config file, then explicit flags.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pinndarts/error.hpp"
#include "pinndarts/harness/experiment.hpp"
#include "pinndarts/metrics/metrics.hpp"

using namespace pinndarts;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kMissingReference = 3, kAllSeedsFailed = 4 };

struct Common {
  std::string config;
  std::string problem, variant, profile, output, cache_dir, execution;
  std::vector<std::uint64_t> seeds;
  std::size_t workers = 0;
  bool no_build = false;
};

void add_common(CLI::App* app, Common& c, bool config_flag = true) {
  if (config_flag) app->add_option("-c,--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  app->add_option("-p,--problem", c.problem, "poisson | heat | wave | burgers");
  app->add_option("--variant", c.variant, "simple | complex");
  app->add_option("--profile", c.profile, "full | small");
  app->add_option("--seeds", c.seeds, "initialization seeds")->delimiter(',');
  app->add_option("-o,--output", c.output, "output directory");
  app->add_option("--cache-dir", c.cache_dir, "Burgers reference cache (default $PINNDARTS_CACHE_DIR)");
  app->add_option("-j,--workers", c.workers, "concurrent training jobs");
  app->add_option("--execution", c.execution, "serial | parallel kernels")->check(CLI::IsMember({"serial", "parallel"}));
  app->add_flag("--no-build-reference", c.no_build, "fail instead of solving a missing Burgers reference");
}

json read_doc(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
}

ExperimentConfig resolve(const Common& c, const std::vector<std::string>& methods) {
  json doc = read_doc(c.config);
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  if (!c.problem.empty()) doc["problem"] = c.problem;
  if (!c.variant.empty()) doc["variant"] = c.variant;
  if (!c.profile.empty()) doc["profile"] = c.profile;
  if (!c.seeds.empty()) doc["seeds"] = c.seeds;
  if (!c.output.empty()) doc["output_dir"] = c.output;
  if (!c.cache_dir.empty()) doc["cache_dir"] = c.cache_dir;
  if (c.workers) doc["workers"] = c.workers;
  if (!c.execution.empty()) doc["execution"] = c.execution;
  if (c.no_build) doc["reference"]["build"] = false;
  if (!methods.empty()) doc["methods"] = methods;
  return parse_config(doc);
}

std::string num(double v, const char* f = "%.4e") {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int run(const ExperimentConfig& config) {
  std::cerr << "pinndarts: " << PdeProblem::make(config.problem, config.variant).name() << ", profile "
            << config.profile << ", " << config.seeds.size() << " seed(s), config " << config_hash(config) << "\n";
  const auto result = run_experiment(config);
  if (!result.comparison.empty()) {
    std::printf("%-12s %14s %12s %12s %7s\n", "method", "mean_rel_l2", "seconds", "ratio_%", "failed");
    for (const auto& r : result.comparison)
      std::printf("%-12s %14s %12s %12s %7zu\n", r.method.c_str(), num(r.mean_error).c_str(),
                  num(r.seconds, "%.1f").c_str(), num(r.error_ratio, "%.1f").c_str(), r.failed_seeds);
  }
  if (result.grid) std::printf("grid best average: %s\n", result.grid->best_average.to_string().c_str());
  if (result.correlation)
    std::printf("spearman(loss, error) = %.4f over %zu pairs\n", result.correlation->coefficient,
                result.correlation->records.size());
  std::printf("wrote %zu files under %s\n", result.files.size(), config.output_dir.string().c_str());
  return result.all_seeds_failed ? kAllSeedsFailed : kOk;
}

int reference(const std::string& action, const Common& c, std::size_t n, const std::vector<std::size_t>& shape) {
  json doc = read_doc(c.config);
  doc["problem"] = "burgers";
  if (!c.profile.empty()) doc["profile"] = c.profile;
  if (!c.cache_dir.empty()) doc["cache_dir"] = c.cache_dir;
  if (n) doc["reference"]["n"] = n;
  if (!shape.empty()) doc["test_grid"] = shape;
  auto config = parse_config(doc);
  auto cfg = config.reference;
  cfg.output = config.test_grid;
  const auto dir = config.cache_dir.empty() ? default_cache_dir() : config.cache_dir;
  const auto path = reference_cache_path(dir, cfg);
  if (action == "build") {
    const auto field = load_reference(dir, cfg, true);
    std::printf("%s: n=%zu steps=%zu dt=%.3e grid %zux%zu\n", path.string().c_str(), field.n, field.steps, field.dt,
                field.shape.nx, field.shape.ny);
    return kOk;
  }
  const auto cached = load_reference(dir, cfg, false);
  const auto fresh = solve_burgers(cfg);
  double diff = 0.0;
  for (std::size_t i = 0; i < fresh.values.size(); ++i)
    diff = std::max(diff, std::abs(fresh.values[i] - cached.values[i]));
  std::printf("%s: max |cached - fresh| = %.3e\n", path.string().c_str(), diff);
  return diff <= 1e-12 ? kOk : kFailure;
}

int dump(const Common& c, const std::string& checkpoint, const std::string& spec_text, std::uint64_t seed) {
  auto config = resolve(c, {});
  const auto setup = make_setup(config);
  const ArtifactMeta meta{config_hash(config)};
  std::vector<double> prediction;
  if (!checkpoint.empty()) {
    std::ifstream in(checkpoint);
    if (!in) throw ConfigError("cannot open checkpoint " + checkpoint);
    const auto ck = load_checkpoint(in);
    if (ck.network.input_dim() != 2) throw ConfigError("checkpoint input dimension does not match the problem");
    prediction = ck.network.predict(setup.test.points);
    std::printf("checkpoint %s: relative L2 %.4e\n", ck.spec.to_string().c_str(),
                relative_l2(prediction, setup.reference));
  } else {
    const auto spec = ArchitectureSpec::parse(spec_text);
    spec.validate(config.max_depth);
    const auto out = eval_phase(spec, setup.widths, setup.activation, setup.problem, setup.train, setup.test,
                                setup.reference, setup.eval, seed, setup.execution);
    prediction = out.network.predict(setup.test.points);
    std::printf("trained %s seed %llu: relative L2 %.4e\n", spec.to_string().c_str(),
                static_cast<unsigned long long>(seed), out.relative_l2);
    std::ostringstream ck;
    save_checkpoint(ck, out.network, spec);
    std::filesystem::create_directories(config.output_dir);
    std::ofstream(config.output_dir / "checkpoint.txt") << ck.str();
  }
  const auto files = emit_solution_dump(config.output_dir, setup.test, setup.reference, prediction, meta);
  for (const auto& f : files) std::printf("wrote %s\n", f.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PINN architecture search: DARTS variants against grid, random and TPE baselines"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));

  Common run_opts;
  auto* run_cmd = app.add_subcommand("run", "run every method listed in a config file");
  run_cmd->add_option("config", run_opts.config, "JSON config file")->required()->check(CLI::ExistingFile);
  add_common(run_cmd, run_opts, false);

  Common grid_opts;
  auto* grid_cmd = app.add_subcommand("grid", "exhaustive even-width grid search with heatmap");
  add_common(grid_cmd, grid_opts);

  Common search_opts;
  std::vector<std::string> methods;
  auto* search_cmd = app.add_subcommand("search", "one or more search methods");
  add_common(search_cmd, search_opts);
  search_cmd->add_option("-m,--method", methods, "grid, random-k<k>, bayes-k<k>, darts, darts+, sdarts, sdarts+")
      ->required()
      ->delimiter(',');

  Common corr_opts;
  auto* corr_cmd = app.add_subcommand("correlate", "Spearman correlation of PINN loss and relative L2 error");
  add_common(corr_cmd, corr_opts);

  Common ref_opts;
  std::string ref_action;
  std::size_t ref_n = 0;
  std::vector<std::size_t> ref_shape;
  auto* ref_cmd = app.add_subcommand("reference", "build or verify the cached Burgers reference field");
  ref_cmd->add_option("action", ref_action, "build | verify")->required()->check(CLI::IsMember({"build", "verify"}));
  ref_cmd->add_option("-c,--config", ref_opts.config, "JSON config file")->check(CLI::ExistingFile);
  ref_cmd->add_option("--profile", ref_opts.profile, "full | small");
  ref_cmd->add_option("--cache-dir", ref_opts.cache_dir, "cache directory");
  ref_cmd->add_option("-n,--nodes", ref_n, "Chebyshev polynomial degree");
  ref_cmd->add_option("--grid", ref_shape, "output grid nx,ny")->delimiter(',')->expected(2);

  Common dump_opts;
  std::string checkpoint, spec_text;
  std::uint64_t dump_seed = 1;
  auto* dump_cmd = app.add_subcommand("dump", "reference, prediction and error fields for one network");
  add_common(dump_cmd, dump_opts);
  auto* ck_opt = dump_cmd->add_option("--checkpoint", checkpoint, "trained network")->check(CLI::ExistingFile);
  auto* spec_opt = dump_cmd->add_option("--spec", spec_text, "train this architecture first, e.g. (4,4,4)");
  ck_opt->excludes(spec_opt);
  dump_cmd->add_option("--seed", dump_seed, "initialization seed with --spec");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return run(resolve(run_opts, {}));
    if (*grid_cmd) return run(resolve(grid_opts, {"grid"}));
    if (*search_cmd) return run(resolve(search_opts, methods));
    if (*corr_cmd) return run(resolve(corr_opts, {"correlation"}));
    if (*ref_cmd) return reference(ref_action, ref_opts, ref_n, ref_shape);
    if (*dump_cmd) {
      if (checkpoint.empty() && spec_text.empty()) throw ConfigError("dump needs --checkpoint or --spec");
      return dump(dump_opts, checkpoint, spec_text, dump_seed);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const MissingReferenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissingReference;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kAllSeedsFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
