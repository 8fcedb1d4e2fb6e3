#include <benchmark/benchmark.h>

#include "relscm/param_vector.hpp"
#include "relscm/queries.hpp"

namespace {

relscm::PosteriorDraws constant_draws(int rows) {
  relscm::ModelParams t = relscm::ModelParams::zeros({});
  t.beta1 = 10.0;
  t.sigmaY = 0.5;
  relscm::PosteriorDraws d;
  d.names = relscm::param_names({});
  d.chains = 1;
  d.draws_per_chain = rows;
  const auto v = relscm::flatten(t);
  for (int i = 0; i < rows; ++i) d.values.insert(d.values.end(), v.begin(), v.end());
  return d;
}

void BM_PredictiveFailureTime(benchmark::State& state) {
  const auto d = constant_draws(static_cast<int>(state.range(0)));
  const relscm::Intervention iv{1, 1, 4, std::nullopt};
  for (auto _ : state) benchmark::DoNotOptimize(relscm::predictive_failure_time(iv, d, {}, 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PredictiveFailureTime)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_ReliabilityCurve(benchmark::State& state) {
  const auto d = constant_draws(20000);
  std::vector<double> grid;
  for (int i = 0; i <= 80; ++i) grid.push_back(0.1 * i);
  for (auto _ : state)
    benchmark::DoNotOptimize(relscm::reliability_curve(grid, {1, 1, 1, -1}, relscm::Regime::AS, std::nullopt, d, {}));
}
BENCHMARK(BM_ReliabilityCurve)->Unit(benchmark::kMillisecond);

void BM_AdjustedDensity(benchmark::State& state) {
  relscm::ModelParams t = relscm::ModelParams::zeros({});
  t.beta1 = 10.0;
  t.sigmaY = 0.5;
  const relscm::Intervention iv{1, 2, 3, std::nullopt};
  double y = 1030.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relscm::adjusted_outcome_density(y, iv, 1000.0, 30.0, t, {}));
    y += 1e-6;
  }
}
BENCHMARK(BM_AdjustedDensity);

}  // namespace
