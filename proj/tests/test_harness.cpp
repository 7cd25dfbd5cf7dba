#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pinndarts/error.hpp"
#include "pinndarts/harness/experiment.hpp"

using namespace pinndarts;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pinndarts-test-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Small profile cut down to seconds: depth <= 2, a few dozen iterations.
json tiny(const std::string& problem, const fs::path& out) {
  return {{"profile", "small"},
          {"problem", problem},
          {"max_depth", 2},
          {"samples", {{"interior", 40}, {"boundary", 20}, {"initial", 20}}},
          {"test_grid", {12, 10}},
          {"eval", {{"iterations", 15}}},
          {"search", {{"max_iterations", 10}, {"stability_window", 5}}},
          {"execution", "serial"},
          {"output_dir", out.string()}};
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  if (!fs::exists(dir)) return 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

}  // namespace

TEST_CASE("profiles") {
  const auto small = profile_defaults("small", ProblemKind::poisson, Variant::simple);
  CHECK(small.widths.widths == WidthTable::small().widths);
  CHECK(small.max_depth == 4);
  CHECK(small.eval.iterations == 2000);
  CHECK(small.samples.interior == 500);
  const auto full = profile_defaults("full", ProblemKind::burgers, Variant::simple);
  CHECK(full.samples.interior == 10000);
  CHECK(full.samples.boundary == 200);
  CHECK(full.samples.initial == 200);
  CHECK(full.test_grid.nx == 256);
  CHECK(full.eval.iterations == 10000);
  CHECK(full.search.alpha_lr == 2e-2);
  CHECK(full.activation == Activation::swish);
  CHECK(profile_defaults("full", ProblemKind::heat, Variant::simple).activation == Activation::tanh);
  CHECK(profile_defaults("full", ProblemKind::wave, Variant::simple).search.alpha_lr == 5e-2);
  CHECK_THROWS_AS(profile_defaults("huge", ProblemKind::heat, Variant::simple), ConfigError);
}

TEST_CASE("config parsing and validation") {
  const json base{{"problem", "heat"}, {"profile", "small"}};
  const auto c = parse_config(base);
  CHECK(c.problem == ProblemKind::heat);
  CHECK(c.seeds.size() == 5);

  json over = base;
  over["eval"] = {{"iterations", 77}};
  over["widths"] = {8, 9, 10, 11};
  const auto o = parse_config(over);
  CHECK(o.eval.iterations == 77);
  CHECK(o.eval.lr_initial == c.eval.lr_initial);
  CHECK(o.widths.width(3) == 10);

  auto bad = [&](json patch) {
    json doc = base;
    doc.merge_patch(patch);
    return doc;
  };
  CHECK_THROWS_AS(parse_config(bad({{"iterations", 5}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"eval", {{"iters", 5}}}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"methods", {"grid", "hyperband"}}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"methods", {"random-k17"}}})), ConfigError);  // 16 configs at depth 4
  CHECK_THROWS_AS(parse_config(bad({{"methods", {"grid", "grid"}}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"seeds", json::array()}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"problem", "navier-stokes"}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"eval", {{"lr_initial", 1e-6}}}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"samples", {{"initial", 0}}}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"max_depth", "four"}})), ConfigError);
  CHECK_THROWS_AS(parse_config(bad({{"format", 2}})), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"profile", "small"}}), ConfigError);
  CHECK_NOTHROW(parse_config(bad({{"methods", {"random-k16", "bayes-k5", "sdarts+", "correlation"}}})));
}

TEST_CASE("shipped configs parse") {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(PINNDARTS_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path());
    CHECK_NOTHROW(load_config(e.path()));
    ++n;
  }
  CHECK(n >= 3);
  const auto heat = load_config(fs::path(PINNDARTS_CONFIG_DIR) / "heat-complex.json");
  const auto defaults = profile_defaults("full", ProblemKind::heat, Variant::complex);
  CHECK(heat.eval.lr_initial == defaults.eval.lr_initial);
  CHECK(heat.search.stability_window == defaults.search.stability_window);
}

TEST_CASE("config hash covers numeric settings only") {
  auto a = parse_config({{"problem", "poisson"}, {"profile", "small"}});
  auto b = a;
  b.output_dir = "elsewhere";
  b.workers = 3;
  CHECK(config_hash(a) == config_hash(b));
  b.eval.lr_final = 2e-4;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("unknown method leaves nothing on disk") {
  const auto out = scratch("unknown");
  auto doc = tiny("poisson", out);
  doc["methods"] = {"grid", "simulated-annealing"};
  CHECK_THROWS_AS(parse_config(doc), ConfigError);
  auto c = parse_config(tiny("poisson", out));
  c.methods = {"grid", "simulated-annealing"};
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("grid plus darts+ file contract") {
  const auto out = scratch("contract");
  auto doc = tiny("poisson", out);
  doc["methods"] = {"grid", "darts+"};
  const auto result = run_experiment(parse_config(doc));
  CHECK(result.reports.size() == 2);
  CHECK(count_files(out / "reports", ".json") == 2);
  CHECK(fs::exists(out / "comparison.csv"));
  CHECK(fs::exists(out / "heatmap.csv"));
  CHECK(count_files(out, ".csv") == 4);  // comparison, heatmap, samples, timings
  CHECK(result.comparison[0].error_ratio == 100.0);
  CHECK(count_files(out / "alpha", ".csv") == 5);
  CHECK(fs::exists(out / "checkpoints" / "darts+.txt"));

  // Every CSV opens with the metadata line, then the column header.
  const auto hash = config_hash(parse_config(doc));
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path());
    std::string meta, header;
    std::getline(in, meta);
    std::getline(in, header);
    CHECK(meta.rfind("# pinndarts " + std::string(kLibraryVersion), 0) == 0);
    CHECK(meta.find("config=" + hash) != std::string::npos);
    CHECK(header.find(',') != std::string::npos);
    CHECK(header[0] != '#');
  }
  // Timings stay out of the reports.
  const auto report = json::parse(slurp(out / "reports" / "grid.json"));
  CHECK(report.dump().find("seconds") == std::string::npos);
  CHECK(report["context"]["config_hash"] == hash);
}

TEST_CASE("full method roster gives nine comparison rows") {
  const auto out = scratch("roster");
  auto doc = tiny("poisson", out);
  doc["seeds"] = {1};
  doc["methods"] = {"grid", "random-k2", "random-k5", "bayes-k2", "bayes-k5", "darts", "darts+", "sdarts", "sdarts+"};
  const auto result = run_experiment(parse_config(doc));
  CHECK(result.comparison.size() == 9);
  std::ifstream in(out / "comparison.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) rows += line[0] != '#';
  CHECK(rows == 10);
  // Baselines on the even-width space never beat the exhaustive grid.
  for (std::size_t i = 1; i < 5; ++i) CHECK(result.comparison[i].error_ratio >= 100.0);
}

TEST_CASE("serial reruns are bit-identical") {
  auto run_once = [](const std::string& name) {
    const auto out = scratch(name);
    auto doc = tiny("heat", out);
    doc["seeds"] = {3, 4};
    doc["methods"] = {"random-k2", "bayes-k2", "sdarts+"};
    run_experiment(parse_config(doc));
    return out;
  };
  const auto a = run_once("rerun-a"), b = run_once("rerun-b");
  for (const char* f : {"reports/random-k2.json", "reports/random-k2.csv", "reports/bayes-k2.json",
                        "reports/sdarts+.json", "reports/sdarts+.csv", "fields/sdarts+/prediction.csv",
                        "alpha/sdarts+-seed3.csv", "samples.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(slurp(a / f).empty());
  }
}

TEST_CASE("solution dumps") {
  const auto out = scratch("dump");
  const auto problem = PdeProblem::poisson(Variant::simple);
  const auto grid = test_grid(problem, default_grid_shape(problem.kind()));
  const auto exact = exact_field(problem, grid.points);
  std::vector<double> pred(exact.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = exact[i] + 1e-3 * std::sin(static_cast<double>(i));
  const auto files = emit_solution_dump(out, grid, exact, pred, {"abc"});
  REQUIRE(files.size() == 3);

  auto read = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "i,j,x,y,value");
    std::vector<double> v;
    std::size_t maxi = 0, maxj = 0;
    while (std::getline(in, line)) {
      std::size_t i, j;
      double x, y, value;
      char c;
      std::istringstream row(line);
      row >> i >> c >> j >> c >> x >> c >> y >> c >> value;
      maxi = std::max(maxi, i);
      maxj = std::max(maxj, j);
      v.push_back(value);
    }
    CHECK(maxi == 99);
    CHECK(maxj == 99);
    return v;
  };
  const auto ref = read(out / "reference.csv"), p = read(out / "prediction.csv"), err = read(out / "error.csv");
  REQUIRE(ref.size() == 10000);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(ref[i] == exact[i]);
    CHECK(std::abs(err[i] - std::abs(ref[i] - p[i])) <= 1e-12);
  }
  CHECK_THROWS_AS(emit_solution_dump(out, grid, exact, std::vector<double>(3), {}), DimensionError);
}

TEST_CASE("Burgers setup passes the cached reference through") {
  const auto cache = scratch("burgers-cache");
  auto doc = tiny("burgers", scratch("burgers-out"));
  doc["cache_dir"] = cache.string();
  doc["reference"] = {{"n", 64}, {"build", false}};
  CHECK_THROWS_AS(make_setup(parse_config(doc)), MissingReferenceError);
  doc["reference"]["build"] = true;
  const auto config = parse_config(doc);
  const auto setup = make_setup(config);
  auto ref_cfg = config.reference;
  ref_cfg.output = config.test_grid;
  const auto field = load_reference(cache, ref_cfg, false);
  CHECK(setup.reference == field.values);
  CHECK(setup.reference.size() == 120);
}
