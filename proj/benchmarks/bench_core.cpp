#include <benchmark/benchmark.h>

#include "gridstealth/attack.hpp"
#include "gridstealth/case_file.hpp"
#include "gridstealth/covariance.hpp"
#include "gridstealth/detection.hpp"
#include "gridstealth/experiments.hpp"
#include "gridstealth/jacobian.hpp"

namespace {

using namespace gridstealth;

const CaseFile& case30() {
  static const CaseFile grid = load_case(GRIDSTEALTH_DATA_DIR "/case30.m");
  return grid;
}

const Jacobian& case30_h() {
  static const Jacobian h = build_jacobian(case30());
  return h;
}

void BM_ParseCase30(benchmark::State& state) {
  const auto text = to_case_text(case30());
  for (auto _ : state) benchmark::DoNotOptimize(parse_case(text));
}
BENCHMARK(BM_ParseCase30);

void BM_BuildJacobian(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_jacobian(case30()));
}
BENCHMARK(BM_BuildJacobian);

void BM_StealthUtility(benchmark::State& state) {
  const auto model = make_model(case30_h(), 0.5, 10.0);
  const auto attack = optimal_attack(model);
  for (auto _ : state) benchmark::DoNotOptimize(stealth_utility(model, attack));
}
BENCHMARK(BM_StealthUtility);

void BM_SampleCovariance(benchmark::State& state) {
  const auto prior = toeplitz_covariance(29, 0.8);
  const auto samples = sample_gaussian(prior, state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(sample_covariance(samples));
}
BENCHMARK(BM_SampleCovariance)->Arg(29)->Arg(100)->Arg(1000);

void BM_ConditionalDivergence(benchmark::State& state) {
  const auto model = make_model(case30_h(), 0.1, 10.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditional_divergence_mc(model, state.range(0), 10, 11));
  }
}
BENCHMARK(BM_ConditionalDivergence)->Arg(29)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_LogLrtColumns(benchmark::State& state) {
  const auto model = make_model(case30_h(), 0.5, 10.0);
  const auto detector = LrtDetector::for_attack(model, optimal_attack(model));
  GaussianStream stream(3);
  const Eigen::MatrixXd y =
      GaussianSampler(detector.clean()).draw_columns(stream, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(detector.log_lrt_columns(y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LogLrtColumns)->Arg(1024);

void BM_LrtStatistics(benchmark::State& state) {
  const auto model = make_model(case30_h(), 0.5, 10.0);
  const auto detector = LrtDetector::for_attack(model, optimal_attack(model));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lrt_statistics(detector, Hypothesis::attacked, 4096, 5, 1));
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_LrtStatistics);

}  // namespace

BENCHMARK_MAIN();
