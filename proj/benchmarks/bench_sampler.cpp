#include <benchmark/benchmark.h>

#include "relscm/sampler.hpp"

namespace {

void BM_NutsStandardNormal(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  relscm::LogDensity target = [](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
    g = -v;
    return -0.5 * v.squaredNorm();
  };
  relscm::InitFn init = [dim](relscm::Rng&) { return Eigen::VectorXd::Zero(dim); };
  std::vector<std::string> names;
  for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i));
  relscm::SamplerConfig cfg;
  cfg.chains = 1;
  cfg.warmup = 200;
  cfg.draws = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(relscm::run_sampler(target, init, names, cfg));
  state.SetItemsProcessed(state.iterations() * (cfg.warmup + cfg.draws));
}
// chains run on worker threads, so wall time is the meaningful figure
BENCHMARK(BM_NutsStandardNormal)->Arg(5)->Arg(45)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_Diagnostics(benchmark::State& state) {
  relscm::Rng rng(3);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> chains(4, std::vector<double>(static_cast<std::size_t>(state.range(0))));
  for (auto& c : chains)
    for (double& x : c) x = nd(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relscm::split_rhat(chains));
    benchmark::DoNotOptimize(relscm::effective_sample_size(chains));
  }
}
BENCHMARK(BM_Diagnostics)->Arg(5000);

}  // namespace
