#include <benchmark/benchmark.h>

#include "relscm/datagen.hpp"
#include "relscm/posterior.hpp"

namespace {

relscm::ModelParams bench_truth() {
  relscm::ModelParams t = relscm::ModelParams::zeros({});
  t.beta1 = 10.0;
  t.beta2 = 30.0;
  t.delta1_S = {-0.7, -0.5, 0.5, 0.7};
  t.sigmaY = 0.5;
  return t;
}

std::vector<relscm::DeviceRecord> dataset(relscm::Regime regime, int n) {
  relscm::GeneratorSpec g;
  g.truth = bench_truth();
  g.regime = regime;
  g.design = relscm::Observational{n};
  g.seed = 1;
  return relscm::generate_dataset(g);
}

void BM_GenerateDataset(benchmark::State& state) {
  relscm::GeneratorSpec g;
  g.truth = bench_truth();
  g.design = relscm::Observational{static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(relscm::generate_dataset(g));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(1024)->Arg(2048);

void BM_NaiveLikelihood(benchmark::State& state) {
  const auto data = dataset(relscm::Regime::AS, static_cast<int>(state.range(0)));
  const auto t = bench_truth();
  for (auto _ : state) benchmark::DoNotOptimize(relscm::log_likelihood(t, data, relscm::Regime::AS, {}));
}
BENCHMARK(BM_NaiveLikelihood)->Arg(1024)->Arg(8192);

void BM_LogPosteriorGradient(benchmark::State& state) {
  const auto regime = state.range(1) ? relscm::Regime::NS : relscm::Regime::AS;
  const auto data = dataset(regime, static_cast<int>(state.range(0)));
  const relscm::LogPosterior lp(data, relscm::FitSpec::for_regime(regime));
  relscm::ModelParams t = bench_truth();
  const Eigen::VectorXd v = lp.layout().unconstrain(t);
  Eigen::VectorXd g;
  for (auto _ : state) benchmark::DoNotOptimize(lp(v, g));
}
BENCHMARK(BM_LogPosteriorGradient)->Args({1024, 0})->Args({8192, 0})->Args({2048, 1});

}  // namespace
