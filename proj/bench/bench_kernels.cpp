// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <vector>

#include "mechprior/acquisition.hpp"
#include "mechprior/harness.hpp"
#include "mechprior/kernels.hpp"
#include "mechprior/network.hpp"
#include "mechprior/rng.hpp"

using namespace mechprior;

namespace {

constexpr kernels::ConvShape kConv1{1, 64, 64, 8, 3, 2};
constexpr kernels::ConvShape kConv2{8, 31, 31, 16, 3, 2};

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(rng, -1.0, 1.0);
  return v;
}

template <bool Serial>
void BM_ConvForward(benchmark::State& state) {
  const auto& s = state.range(0) == 1 ? kConv1 : kConv2;
  auto in = random_vector(s.in_size(), 1);
  auto w = random_vector(s.weight_size(), 2);
  auto b = random_vector(static_cast<std::size_t>(s.out_channels), 3);
  std::vector<double> pre(s.out_size()), out(s.out_size());
  for (auto _ : state) {
    if constexpr (Serial) {
      kernels::conv_relu_forward_serial(s, in, w, b, pre, out);
    } else {
      kernels::conv_relu_forward(s, in, w, b, pre, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Serial>
void BM_ConvBackward(benchmark::State& state) {
  const auto& s = state.range(0) == 1 ? kConv1 : kConv2;
  auto in = random_vector(s.in_size(), 1);
  auto w = random_vector(s.weight_size(), 2);
  auto g = random_vector(s.out_size(), 4);
  std::vector<double> gw(s.weight_size()), gb(static_cast<std::size_t>(s.out_channels)), gi(s.in_size());
  for (auto _ : state) {
    if constexpr (Serial) {
      kernels::conv_backward_serial(s, in, w, g, gw, gb, gi);
    } else {
      kernels::conv_backward(s, in, w, g, gw, gb, gi);
    }
    benchmark::DoNotOptimize(gi.data());
  }
}

template <bool Serial>
void BM_LossAndGradient(benchmark::State& state) {
  const auto images = static_cast<int>(state.range(0));
  Dataset d;
  for (int l = 0; l < images; ++l) {
    const auto m = generate_mechanism(MechanismKind::Slider, static_cast<std::uint64_t>(l));
    for (int t = 0; t < 64 / images + 1; ++t) d.add(m, {0.1, 0.2}, 0.05);
  }
  auto samples = d.samples();
  samples.resize(64);
  const auto w = init_weights(7);
  for (auto _ : state) {
    auto lg = Serial ? loss_and_gradient_serial(w, samples) : loss_and_gradient(w, samples);
    benchmark::DoNotOptimize(lg.loss);
  }
}

template <bool Serial>
void BM_Acquisition(benchmark::State& state) {
  const auto kind = state.range(0) == 0 ? MechanismKind::Slider : MechanismKind::Door;
  const auto m = generate_mechanism(kind, 11);
  const NetworkPrior prior(init_weights(3));
  const auto f = prior.bind(m, render(m));
  const auto bounds = action_bounds(kind);
  GpState gp(default_kernel(kind));
  Rng rng(5);
  for (int i = 0; i < state.range(1); ++i) {
    Action a(bounds.dims());
    for (std::size_t d = 0; d < a.size(); ++d) a[d] = uniform(rng, bounds.low[d], bounds.high[d]);
    gp = gp.add_observation(a, execute_action(m, a) - f(a));
  }
  auto criterion = [&](std::span<const double> a) { return ucb_score(gp, f(a), a, 4.0); };
  const auto cfg = default_acquisition(kind);
  for (auto _ : state) {
    auto best = Serial ? maximize_serial(criterion, bounds, cfg) : maximize(criterion, bounds, cfg);
    benchmark::DoNotOptimize(best.score);
  }
}

}  // namespace

BENCHMARK(BM_ConvForward<false>)->Arg(1)->Arg(2);
BENCHMARK(BM_ConvForward<true>)->Arg(1)->Arg(2);
BENCHMARK(BM_ConvBackward<false>)->Arg(1)->Arg(2);
BENCHMARK(BM_ConvBackward<true>)->Arg(1)->Arg(2);
BENCHMARK(BM_LossAndGradient<false>)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LossAndGradient<true>)->Arg(1)->Arg(8)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Acquisition<false>)->Args({0, 0})->Args({0, 100})->Args({1, 100})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Acquisition<true>)->Args({0, 0})->Args({0, 100})->Args({1, 100})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
