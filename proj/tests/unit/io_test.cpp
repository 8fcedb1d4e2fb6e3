#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "relscm/datagen.hpp"
#include "relscm/errors.hpp"
#include "relscm/fit.hpp"
#include "relscm/io.hpp"
#include "relscm/param_vector.hpp"
#include "test_support.hpp"

using namespace relscm;
using namespace relscm::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "relscm_io_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string dataset_text(const std::vector<DeviceRecord>& data) {
  std::ostringstream os;
  io::write_dataset_csv(os, data);
  return os.str();
}

}  // namespace

TEST(Format6, FixedDecimals) {
  EXPECT_EQ(io::format6(1.0), "1.000000");
  EXPECT_EQ(io::format6(-2.5), "-2.500000");
  EXPECT_EQ(io::format6(-1e-9), "0.000000");
  EXPECT_EQ(io::format6(1003.1234567), "1003.123457");
}

TEST(DatasetCsv, RoundTripIsByteIdentical) {
  GeneratorSpec spec;
  spec.truth = paper_truth();
  spec.regime = Regime::NS;
  spec.design = Observational{100};
  const std::string first = dataset_text(generate_dataset(spec));
  std::istringstream in(first);
  const auto back = io::read_dataset_csv(in);
  ASSERT_EQ(back.size(), 100u);
  EXPECT_EQ(dataset_text(back), first);
  EXPECT_EQ(first.substr(0, first.find('\n')), io::kDatasetHeader);
}

TEST(DatasetCsv, MissingMeasurementsRoundTrip) {
  const std::vector<DeviceRecord> data{
      make_record({1, 2, 3, 1}, Regime::NS, {0, 7.2}, {1000.25, 1007.5}, "a"),
      make_record({4, 4, 4, -1}, Regime::AS, {0, 0.72, 2.16, 3.6}, {999, 1006, 1021, 1160}, "b")};
  const std::string text = dataset_text(data);
  std::istringstream in(text);
  const auto back = io::read_dataset_csv(in);
  EXPECT_FALSE(back[0].has(2));
  EXPECT_EQ(back[1].config, (Configuration{4, 4, 4, -1}));
  EXPECT_EQ(dataset_text(back), text);
}

TEST(DatasetCsv, ErrorsReportLineNumber) {
  const std::string header = std::string(io::kDatasetHeader) + "\n";
  const std::string good = "1,AS,1,1,1,-1,0,0.72,2.16,3.6,1000,1007,1022,1160\n";
  auto expect_line = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      io::read_dataset_csv(in);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_line(header + good + "2,AS,1,1,1,-1,0,0.72,2.16\n", "line 3");
  expect_line(header + good + good + "3,AS,1,1,x,-1,0,0.72,2.16,3.6,1000,1007,1022,1160\n", "line 4");
  expect_line(header + "1,ZZ,1,1,1,-1,0,0.72,2.16,3.6,1000,1007,1022,1160\n", "line 2");
  expect_line("id,regime\n" + good, "line 1");
}

TEST(ParamsJson, RoundTripAndUnknownKey) {
  Rng rng(81);
  const ModelParams t = random_params(rng);
  const ModelParams back = io::params_from_json(io::params_to_json(t));
  EXPECT_EQ(flatten(back), flatten(t));
  EXPECT_THROW(io::params_from_json(R"({"mu0": 1000, "bogus": 1})"), ConfigError);
  const ModelParams sparse = io::params_from_json(R"({"mu0": 990, "beta1": 3})");
  EXPECT_EQ(sparse.mu0, 990.0);
  EXPECT_EQ(sparse.alpha_S, std::vector<double>(4, 0.0));
  EXPECT_EQ(sparse.pi_H, (std::vector<double>{0.5, 0.5}));
}

TEST(GeneratorSpecJson, RoundTripAndErrors) {
  const GeneratorSpec spec = io::generator_spec_from_json(io::read_text(data_path("generate_as.json")), data_path(""));
  EXPECT_EQ(spec.regime, Regime::AS);
  EXPECT_EQ(std::get<FullFactorial>(spec.design).replicates, 8);
  const GeneratorSpec again = io::generator_spec_from_json(io::generator_spec_to_json(spec));
  EXPECT_EQ(io::generator_spec_to_json(again), io::generator_spec_to_json(spec));
  EXPECT_THROW(io::generator_spec_from_json(R"({"regime": "AS", "design": {"type": "full_factorial"}, "colour": 1})"),
               ConfigError);
  EXPECT_THROW(io::generator_spec_from_json(R"({"regime": "XX"})"), ConfigError);
}

TEST(FitConfigJson, ParsesAndRejects) {
  const io::FitConfig cfg = io::fit_config_from_json(io::read_text(data_path("fit_ns.json")));
  EXPECT_EQ(cfg.spec.regime, Regime::NS);
  EXPECT_TRUE(cfg.spec.probabilities_active);
  EXPECT_FALSE(cfg.spec.cubic_active);
  EXPECT_EQ(cfg.sampler.chains, 4);
  EXPECT_THROW(io::fit_config_from_json(R"({"regime": "AS", "sampler": {"chains": 1}})"), ConfigError);
  EXPECT_THROW(io::fit_config_from_json(R"({"regime": "AS", "samplr": {}})"), ConfigError);
  EXPECT_THROW(io::fit_config_from_json(R"({"regime": "AS", "probabilities_active": true})"), ConfigError);
}

TEST(DrawsFiles, RoundTripIsByteIdentical) {
  GeneratorSpec g;
  g.truth = paper_truth();
  g.design = FullFactorial{1};
  const auto data = generate_dataset(g);
  SamplerConfig sc;
  sc.chains = 2;
  sc.warmup = 100;
  sc.draws = 60;
  sc.seed = 5;
  const FitSpec spec = FitSpec::for_regime(Regime::AS);
  const FitResult r = fit(data, spec, sc);

  io::DrawsBundle b{r.draws, spec, r.diagnostics, "tiny.csv"};
  const fs::path p = scratch("draws.csv");
  io::save_draws(p, b);
  const io::DrawsBundle back = io::load_draws(p);
  EXPECT_EQ(back.draws.values, r.draws.values);
  EXPECT_EQ(back.draws.names, r.draws.names);
  EXPECT_EQ(back.draws.chains, 2);
  EXPECT_EQ(back.dataset, "tiny.csv");
  ASSERT_TRUE(back.diagnostics.has_value());
  EXPECT_EQ(back.diagnostics->converged, r.diagnostics.converged);

  std::ostringstream a, c;
  io::write_draws_csv(a, r.draws);
  io::write_draws_csv(c, back.draws);
  EXPECT_EQ(a.str(), c.str());
  EXPECT_EQ(io::draws_sidecar_json(back), io::draws_sidecar_json(b));

  // every stored draw satisfies the parameter invariants
  for (const auto& t : draw_params(back.draws)) EXPECT_NO_THROW(t.validate());
}

TEST(DrawsFiles, MismatchedSidecarRejected) {
  PosteriorDraws d = repeated_draws(paper_truth(), 4);
  d.chains = 2;
  d.draws_per_chain = 2;
  io::DrawsBundle b{d, FitSpec::for_regime(Regime::AS), std::nullopt, "x.csv"};
  const fs::path p = scratch("mismatch.csv");
  io::save_draws(p, b);
  io::DrawsBundle other = b;
  other.draws.chains = 1;
  other.draws.draws_per_chain = 4;
  io::write_text(p.string() + ".json", io::draws_sidecar_json(other));
  EXPECT_THROW(io::load_draws(p), DataError);
}
