#include <benchmark/benchmark.h>

#include "anscombe/oracle.hpp"

using namespace anscombe;

namespace {

const Space kLine = Space::euclidean(1);

Law rademacher() {
  return Law::uniform_finite({MetricPoint::real(-1), MetricPoint::real(1)});
}

void BM_RngStream(benchmark::State& state) {
  RngStream rng(42, 0);
  for (auto _ : state) benchmark::DoNotOptimize(rng.next_u64());
}
BENCHMARK(BM_RngStream);

void BM_SamplePartialSumPath(benchmark::State& state) {
  const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
  const int64_t horizon = state.range(0);
  uint64_t stream = 0;
  for (auto _ : state) {
    RngStream rng(7, stream++);
    benchmark::DoNotOptimize(sample_path(m, rng, horizon));
  }
  state.SetItemsProcessed(state.iterations() * horizon);
}
BENCHMARK(BM_SamplePartialSumPath)->Arg(256)->Arg(1024);

void BM_WindowExceedance(benchmark::State& state) {
  const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        window_exceedance(m, state.range(0), 0.1, 0.25, 2000, McOptions{3, 1}));
  }
}
BENCHMARK(BM_WindowExceedance)->Arg(100)->Arg(400);

void BM_ChiEstimator(benchmark::State& state) {
  const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
  EstimatorGrid g;
  g.epsilon_grid = {0.25, 0.5};
  g.delta_grid = {0.1, 0.2};
  g.n_lo = 50;
  g.n_hi = 150;
  g.stride = 20;
  g.samples = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(chi_ansc(m, g, McOptions{5, 1}));
}
BENCHMARK(BM_ChiEstimator)->Arg(1000)->Arg(4000);

void BM_LambdaWEstimator(benchmark::State& state) {
  const auto m = ProcessModel::partial_sum_normalized(kLine, rademacher());
  const SetFamily family =
      SetFamily::half_lines({-1.0, -0.5, 0.0, 0.5, 1.0}, true, true);
  EstimatorGrid g;
  g.epsilon_grid = {0.25, 0.5};
  g.delta_grid = {0.1};
  g.n_lo = 100;
  g.n_hi = 140;
  g.stride = 10;
  g.samples = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(lambda_w_marginal(m, Law::normal(0, 1), family, g, McOptions{5, 1}));
}
BENCHMARK(BM_LambdaWEstimator)->Arg(1000)->Arg(4000);

void BM_FiveForms(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  RngStream rng(11, 0);
  std::vector<MetricPoint> pts;
  double x = 0.0;
  for (int i = 0; i < k; ++i) {
    x += 0.5 + rng.next_unit();
    pts.push_back(MetricPoint::real(x));
  }
  auto law = [&] {
    std::vector<double> w(k);
    double sum = 0;
    for (auto& v : w) sum += (v = rng.next_unit() + 1e-3);
    for (auto& v : w) v /= sum;
    return FiniteDistribution::make(pts, w);
  };
  std::vector<FiniteDistribution> marginals;
  for (int i = 0; i < 20; ++i) marginals.push_back(law());
  const FiniteDistribution target = law();
  for (auto _ : state)
    benchmark::DoNotOptimize(lambda_w_five_forms(kLine, marginals, target));
}
BENCHMARK(BM_FiveForms)->Arg(8)->Arg(12);

void BM_ExactChiEnumeration(benchmark::State& state) {
  const auto spec =
      exact_finite_spec(ProcessModel::partial_sum_normalized(kLine, rademacher()),
                        IndexModel::deterministic(KnSpec::linear(1.0)), state.range(0));
  EstimatorGrid g;
  g.epsilon_grid = {0.25, 0.75};
  g.delta_grid = {0.25};
  g.n_lo = 8;
  g.n_hi = state.range(0) * 4 / 5;
  g.stride = 2;
  g.samples = 100;
  for (auto _ : state) benchmark::DoNotOptimize(exact_chi_surrogate(spec, g));
}
BENCHMARK(BM_ExactChiEnumeration)->Arg(12)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
