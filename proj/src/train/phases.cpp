#include "pinndarts/train/phases.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "pinndarts/error.hpp"
#include "pinndarts/metrics/metrics.hpp"
#include "pinndarts/train/adam.hpp"

namespace pinndarts {

double lr_schedule(const EvalPhaseConfig& config, std::size_t iteration) {
  if (!(config.lr_final > 0.0) || config.lr_initial < config.lr_final)
    throw ConfigError("learning rates must satisfy initial >= final > 0");
  if (iteration >= config.iterations) throw ConfigError("lr_schedule: iteration out of range");
  if (iteration == 0 || config.iterations == 1) return config.lr_initial;
  if (iteration == config.iterations - 1) return config.lr_final;
  const double s = static_cast<double>(iteration) / static_cast<double>(config.iterations - 1);
  return config.lr_initial * std::pow(config.lr_final / config.lr_initial, s);
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::none:
      return "none";
    case StopReason::max_iterations:
      return "max-iterations";
    case StopReason::ranking_stable:
      return "ranking-stable";
    case StopReason::skip_threshold:
      return "skip-threshold";
  }
  return "?";
}

StopReason early_stop_check(std::span<const std::vector<std::uint8_t>> ranking_history, std::size_t skip_count,
                            const SearchPhaseConfig& config) {
  if (skip_count >= config.skip_threshold) return StopReason::skip_threshold;
  const std::size_t w = config.stability_window;
  if (w == 0 || ranking_history.size() < w) return StopReason::none;
  const auto& last = ranking_history.back();
  for (std::size_t i = ranking_history.size() - w; i + 1 < ranking_history.size(); ++i)
    if (ranking_history[i] != last) return StopReason::none;
  return StopReason::ranking_stable;
}

SearchOutcome search_phase(MixedNetwork& net, const PdeProblem& problem, const SampleSet& train,
                           const SampleSet& test, const SearchPhaseConfig& config, Execution execution) {
  if (!(config.alpha_lr > 0.0) || !(config.weight_lr > 0.0)) throw ConfigError("search learning rates must be positive");
  const std::size_t nw = net.weight_count();
  const std::size_t na = net.parameter_count() - nw;
  AdamState weight_state(nw), alpha_state(na);
  std::vector<double> grad(net.parameter_count());
  SearchOutcome out;
  out.alpha_trajectory.push_back(net.alpha());

  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    LossBreakdown train_loss, test_loss;
    try {
      train_loss = pinn_loss_gradient(net, problem, train, config.weights, grad, GradientScope::weights_only(),
                                      execution);
      if (config.freeze_alpha)
        test_loss = pinn_loss(net, problem, test, config.weights, execution);
      else
        test_loss = pinn_loss_gradient(net, problem, test, config.weights, grad,
                                       GradientScope::architecture_only(), execution);
    } catch (const NumericalError& e) {
      throw NumericalError("search iteration " + std::to_string(it) + ": " + e.what());
    }
    out.train_loss.push_back(train_loss.total);
    out.test_loss.push_back(test_loss.total);

    auto params = net.mutable_parameters();
    adam_step(weight_state, std::span(grad).first(nw), params.first(nw), config.weight_lr);
    if (!config.freeze_alpha) adam_step(alpha_state, std::span(grad).subspan(nw), params.subspan(nw), config.alpha_lr);

    const AlphaMatrix alpha = net.alpha();
    out.alpha_trajectory.push_back(alpha);
    out.rankings.push_back(alpha_ranking(alpha));
    out.iterations = it + 1;
    if (config.early_stop) {
      const StopReason r = early_stop_check(out.rankings, discretize(alpha).skip_count, config);
      if (r != StopReason::none) {
        out.reason = r;
        break;
      }
    }
  }
  out.selection = discretize(net.alpha());
  return out;
}

EvalOutcome eval_phase(const ArchitectureSpec& spec, const WidthTable& widths, Activation activation,
                       const PdeProblem& problem, const SampleSet& train, const TestGrid& test,
                       std::span<const double> reference, const EvalPhaseConfig& config, std::uint64_t seed,
                       Execution execution) {
  if (reference.size() != test.points.size()) throw DimensionError("eval_phase: reference does not match test grid");
  Fnn net = build_compact_fnn(spec, widths, problem.domain().lo.size(), activation, seed);
  AdamState state(net.parameter_count());
  std::vector<double> grad(net.parameter_count());
  for (std::size_t it = 0; it < config.iterations; ++it) {
    std::fill(grad.begin(), grad.end(), 0.0);
    try {
      pinn_loss_gradient(net, problem, train, config.weights, grad, GradientScope::all(), execution);
    } catch (const NumericalError& e) {
      throw NumericalError("training iteration " + std::to_string(it) + ": " + e.what());
    }
    adam_step(state, grad, net.mutable_parameters(), lr_schedule(config, it));
  }
  EvalOutcome out{std::move(net), {}, {}, 0.0};
  out.train_loss = pinn_loss(out.network, problem, train, config.weights, execution);
  out.test_loss = pinn_loss(out.network, problem, test.samples, config.weights, execution);
  const auto prediction = out.network.predict(test.points);
  require_finite(prediction, "test-grid prediction");
  out.relative_l2 = relative_l2(prediction, reference);
  return out;
}

std::vector<double> exact_field(const PdeProblem& problem, const PointSet& points) {
  std::vector<double> u(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) u[i] = problem.exact(points[i]);
  return u;
}

void save_checkpoint(std::ostream& out, const Fnn& net, const ArchitectureSpec& spec) {
  out << "pinndarts-checkpoint " << kCheckpointVersion << '\n';
  out << "spec " << spec.to_string() << '\n';
  out << "activation " << to_string(net.activation()) << '\n';
  out << "input_dim " << net.input_dim() << '\n';
  out << "hidden";
  for (std::size_t w : net.hidden_widths()) out << ' ' << w;
  out << '\n';
  out << "parameters " << net.parameter_count() << '\n';
  const auto old = out.precision(17);
  for (double p : net.parameters()) out << p << '\n';
  out.precision(old);
}

Checkpoint load_checkpoint(std::istream& in) {
  auto expect = [&](const std::string& key) {
    std::string k;
    if (!(in >> k) || k != key) throw ConfigError("checkpoint: expected '" + key + "'");
  };
  expect("pinndarts-checkpoint");
  int version = 0;
  if (!(in >> version) || version != kCheckpointVersion)
    throw ConfigError("checkpoint: unsupported version " + std::to_string(version));
  expect("spec");
  std::string spec_text, act_text;
  in >> spec_text;
  expect("activation");
  in >> act_text;
  expect("input_dim");
  std::size_t input_dim = 0;
  in >> input_dim;
  expect("hidden");
  std::string line;
  std::getline(in, line);
  std::istringstream hs(line);
  std::vector<std::size_t> hidden;
  for (std::size_t w; hs >> w;) hidden.push_back(w);
  expect("parameters");
  std::size_t count = 0;
  in >> count;
  if (!in) throw ConfigError("checkpoint: truncated header");
  Fnn net(input_dim, hidden, parse_activation(act_text));
  if (net.parameter_count() != count) throw ConfigError("checkpoint: parameter count does not match architecture");
  for (double& p : net.mutable_parameters()) {
    std::string token;
    if (!(in >> token)) throw ConfigError("checkpoint: truncated parameter list");
    p = std::stod(token);
  }
  return {std::move(net), ArchitectureSpec::parse(spec_text)};
}

void write_alpha_trajectory_csv(std::ostream& out, std::span<const AlphaMatrix> trajectory, const ArtifactMeta& meta) {
  write_csv_preamble(out, meta, "alpha-trajectory", 1);
  out << "iteration,edge,candidate,alpha\n";
  const auto old = out.precision(17);
  for (std::size_t it = 0; it < trajectory.size(); ++it)
    for (std::size_t e = 0; e < trajectory[it].edges(); ++e)
      for (std::size_t c = 0; c < kCandidateCount; ++c)
        out << it << ',' << e << ',' << c << ',' << trajectory[it](e, c) << '\n';
  out.precision(old);
}

}  // namespace pinndarts
