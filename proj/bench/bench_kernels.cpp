// Serial per-point reference against the batched kernels, serial and OpenMP.
#include <benchmark/benchmark.h>

#include "pinndarts/loss/pinn_loss.hpp"
#include "pinndarts/nn/batch.hpp"
#include "pinndarts/nn/reference.hpp"
#include "pinndarts/sampling/samples.hpp"

using namespace pinndarts;

namespace {

const PdeProblem& poisson() {
  static const auto p = PdeProblem::poisson(Variant::simple);
  return p;
}

Fnn net(std::size_t width, std::size_t depth) {
  return Fnn::initialized(2, std::vector<std::size_t>(depth + 1, width), Activation::tanh, 7);
}

SampleSet samples(std::size_t interior) {
  return sample_training(poisson(), {interior, interior / 10 + 1, 0}, 3);
}

void BM_ReferenceJet(benchmark::State& state) {
  const auto f = net(static_cast<std::size_t>(state.range(0)), 3);
  const auto s = samples(static_cast<std::size_t>(state.range(1)));
  const auto request = poisson().residual_request();
  for (auto _ : state) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.interior.size(); ++i) acc += reference::fnn_jet(f, s.interior[i], request).d2[0];
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.interior.size()));
}

template <Execution E>
void BM_BatchedJet(benchmark::State& state) {
  const auto f = net(static_cast<std::size_t>(state.range(0)), 3);
  const auto s = samples(static_cast<std::size_t>(state.range(1)));
  const auto request = poisson().residual_request();
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(f, s.interior, request, E));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.interior.size()));
}

void BM_TapeLossGradient(benchmark::State& state) {
  const auto f = net(static_cast<std::size_t>(state.range(0)), 3);
  const auto s = samples(static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) {
    Tape tape(f.parameter_count());
    const auto loss = pinn_loss_tape(tape, f, poisson(), s);
    benchmark::DoNotOptimize(tape.gradient(loss.total));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.interior.size()));
}

template <Execution E>
void BM_FusedLossGradient(benchmark::State& state) {
  const auto f = net(static_cast<std::size_t>(state.range(0)), 3);
  const auto s = samples(static_cast<std::size_t>(state.range(1)));
  std::vector<double> grad(f.parameter_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(pinn_loss_gradient(f, poisson(), s, {}, grad, GradientScope::all(), E));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.interior.size()));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long width : {16, 64, 128}) b->Args({width, 512});
  b->Unit(benchmark::kMillisecond);
}

void small_sizes(benchmark::internal::Benchmark* b) {
  b->Args({16, 64})->Args({64, 64})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_ReferenceJet)->Apply(sizes);
BENCHMARK(BM_BatchedJet<Execution::serial>)->Apply(sizes);
BENCHMARK(BM_BatchedJet<Execution::parallel>)->Apply(sizes);
BENCHMARK(BM_TapeLossGradient)->Apply(small_sizes);
BENCHMARK(BM_FusedLossGradient<Execution::serial>)->Apply(small_sizes)->Apply(sizes);
BENCHMARK(BM_FusedLossGradient<Execution::parallel>)->Apply(sizes);

BENCHMARK_MAIN();
