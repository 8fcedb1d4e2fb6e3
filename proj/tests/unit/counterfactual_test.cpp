#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "relscm/counterfactual.hpp"
#include "relscm/datagen.hpp"
#include "relscm/errors.hpp"
#include "test_support.hpp"

using namespace relscm;
using namespace relscm::testing;

namespace {

DeviceRecord ns_device(const ModelParams& t, std::uint64_t seed, Configuration cfg = {2, 3, 1, 1}) {
  Rng rng(seed);
  DeviceRecord d = generate_device(cfg, Regime::NS, t, FixedConstants{}, rng);
  d.id = "dev" + std::to_string(seed);
  return d;
}

}  // namespace

TEST(RecoverResidual, NoiselessRecordGivesZero) {
  ModelParams t = paper_truth();
  t.sigma0 = t.sigmaY = 0.0;
  const DeviceRecord d = ns_device(t, 1);
  ModelParams eval = paper_truth();
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(recover_residual(d, k, eval, {}), 0.0, 1e-10);
}

TEST(RecoverResidual, RecoversKnownNoise) {
  const ModelParams t = paper_truth();
  const FixedConstants c;
  const Configuration cfg{4, 2, 3, -1};
  const double u0 = 0.7, u2 = -0.35;
  const double y0 = oracle_mean_y0(cfg, t) + u0;
  const double w2 = 21.6;
  const double y2 = oracle_mean_yt(y0, cfg, w2, Regime::NS, t, c) + u2;
  const auto d = make_record(cfg, Regime::NS, {0, 7.2, w2}, {y0, y0 + 1.0, y2});
  EXPECT_NEAR(recover_residual(d, 0, t, c), u0, 1e-10);
  EXPECT_NEAR(recover_residual(d, 2, t, c), u2, 1e-10);
}

TEST(RecoverResidual, MatchesSubtractionOracle) {
  Rng rng(71);
  const ModelParams truth = paper_truth();
  const FixedConstants c;
  for (int rep = 0; rep < 200; ++rep) {
    const ModelParams t = random_params(rng);
    const Regime r = rep % 2 ? Regime::NS : Regime::AS;
    Rng g(static_cast<std::uint64_t>(rep));
    const DeviceRecord d = generate_device(random_config(rng), r, truth, c, g);
    for (int k = 1; k < 4; ++k) {
      const double oracle = *d.resistances[k] - oracle_mean_yt(*d.resistances[0], d.config, *d.times[k], r, t, c);
      EXPECT_NEAR(recover_residual(d, k, t, c), oracle, 1e-9);
    }
  }
}

TEST(RecoverResidual, MissingMeasurement) {
  const auto d = make_record({1, 1, 1, -1}, Regime::NS, {0, 7.2}, {1000, 1001});
  EXPECT_THROW(recover_residual(d, 2, paper_truth(), {}), DataError);
}

TEST(CfOutcome, FactualOverridesAreConsistent) {
  Rng rng(72);
  const ModelParams truth = paper_truth();
  for (int rep = 0; rep < 200; ++rep) {
    const ModelParams t = random_params(rng);
    const DeviceRecord d = ns_device(truth, 100 + rep, random_config(rng));
    for (int k = 1; k < 4; ++k) {
      EXPECT_EQ(cf_outcome_at_time(d, k, *d.times[k], t, {}), *d.resistances[k]);
      EXPECT_EQ(cf_outcome_humidity(d, k, d.config.x_H, t, {}), *d.resistances[k]);
      EXPECT_EQ(cf_outcome(d, k, std::nullopt, std::nullopt, t, {}), *d.resistances[k]);
    }
  }
}

TEST(CfOutcome, TimeZeroGivesY0PlusResidual) {
  const ModelParams t = paper_truth();
  const DeviceRecord d = ns_device(t, 3);
  for (int k = 1; k < 4; ++k) {
    EXPECT_NEAR(cf_outcome_at_time(d, k, 0.0, t, {}), *d.resistances[0] + recover_residual(d, k, t, {}), 1e-9);
  }
  EXPECT_THROW(cf_outcome_at_time(d, 1, -1.0, t, {}), DomainError);
}

TEST(CfOutcome, NsIncreaseIsLinearInTime) {
  Rng rng(73);
  const ModelParams truth = paper_truth();
  for (int rep = 0; rep < 100; ++rep) {
    const ModelParams t = random_params(rng);
    const DeviceRecord d = ns_device(truth, 200 + rep);
    const double y0 = *d.resistances[0];
    const double u = recover_residual(d, 2, t, {});
    const double w = 5.0 + rep * 0.3;
    const double one = cf_outcome_at_time(d, 2, w, t, {}) - y0 - u;
    const double two = cf_outcome_at_time(d, 2, 2.0 * w, t, {}) - y0 - u;
    EXPECT_NEAR(two, 2.0 * one, 1e-8);
  }
}

TEST(CfOutcome, StrictlyIncreasingInTimeUnderNs) {
  const ModelParams t = paper_truth();
  const DeviceRecord d = ns_device(t, 4);
  double prev = -1e300;
  for (int i = 0; i <= 100; ++i) {
    const double v = cf_outcome_at_time(d, 3, 0.6 * i, t, {});
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(CfOutcome, HumidityDifferenceIsResidualFree) {
  Rng rng(74);
  const FixedConstants c;
  const ModelParams truth = paper_truth();
  for (int rep = 0; rep < 100; ++rep) {
    const ModelParams t = random_params(rng);
    Configuration cfg = random_config(rng);
    cfg.x_H = 1;
    const DeviceRecord d = ns_device(truth, 300 + rep, cfg);
    for (int k = 1; k < 4; ++k) {
      const double diff = cf_outcome_humidity(d, k, -1, t, c) - *d.resistances[k];
      EXPECT_NEAR(diff, (t.delta1_H[0] - t.delta1_H[1]) * *d.times[k] / c.gamma, 1e-9);
    }
  }
  const DeviceRecord d = ns_device(truth, 5);
  EXPECT_THROW(cf_outcome_humidity(d, 1, 0, truth, c), CardinalityError);
}

TEST(CfFailureTime, ClosedForm) {
  ModelParams t = ModelParams::zeros({});
  t.beta1 = 20.0;
  const FixedConstants c;
  const Configuration cfg{1, 1, 1, -1};
  // mu0 = 1000, u3 = 0 at w3 = 36: y3 = 1000 + 20 * 3.6
  const auto d = make_record(cfg, Regime::NS, {0, 7.2, 21.6, 36.0}, {1000, 1014.4, 1043.2, 1072.0});
  EXPECT_NEAR(cf_failure_time(d, t, c), 50.0, 1e-10);
}

TEST(CfFailureTime, FixedPointAtThreshold) {
  Rng rng(75);
  const ModelParams truth = paper_truth();
  const FixedConstants c;
  for (int rep = 0; rep < 200; ++rep) {
    const ModelParams t = random_params(rng);
    const DeviceRecord d = ns_device(truth, 400 + rep, random_config(rng));
    const double wf = cf_failure_time(d, t, c);
    EXPECT_NEAR(cf_outcome_at_time(d, 3, wf, t, c), 1.1 * *d.resistances[0], 1e-8);
  }
}

TEST(CfFailureTime, Errors) {
  ModelParams t = paper_truth();
  const DeviceRecord d = ns_device(t, 6);
  DeviceRecord as = d;
  as.regime = Regime::AS;
  EXPECT_THROW(cf_failure_time(as, t, {}), ConfigError);
  t.beta1 = -100.0;
  EXPECT_THROW(cf_failure_time(d, t, {}), NonFailingTrajectoryError);
}

TEST(CfQuery, Validation) {
  CounterfactualQuery q;
  q.record = ns_device(paper_truth(), 7);
  EXPECT_THROW(q.validate(), ConfigError);
  q.time = 10.0;
  EXPECT_NO_THROW(q.validate());
  q.question = CounterfactualQuery::Question::FailureTime;
  EXPECT_NO_THROW(q.validate());
  q.record.regime = Regime::AS;
  EXPECT_THROW(q.validate(), ConfigError);
}

TEST(CfPosterior, FactualOverrideHasZeroSpread) {
  Rng rng(76);
  std::vector<ModelParams> rows;
  for (int i = 0; i < 150; ++i) rows.push_back(random_params(rng));
  const PosteriorDraws d = draws_from_params(rows);
  CounterfactualQuery q;
  q.record = ns_device(paper_truth(), 8);
  q.target = 2;
  q.humidity = q.record.config.x_H;
  const auto r = cf_posterior(q, d, {});
  ASSERT_EQ(r.values.size(), 150u);
  for (double v : r.values) EXPECT_EQ(v, *q.record.resistances[2]);
  EXPECT_EQ(r.sd, 0.0);
  EXPECT_EQ(r.hdi.lo, r.hdi.hi);
}

TEST(CfPosterior, SummaryAgreesWithValues) {
  Rng rng(77);
  std::vector<ModelParams> rows;
  for (int i = 0; i < 301; ++i) rows.push_back(random_params(rng));
  CounterfactualQuery q;
  q.record = ns_device(paper_truth(), 9);
  q.question = CounterfactualQuery::Question::FailureTime;
  const auto r = cf_posterior(q, draws_from_params(rows), {}, 0.9);
  ASSERT_EQ(r.values.size(), 301u);
  double sum = 0.0;
  for (double v : r.values) sum += v;
  EXPECT_NEAR(r.mean, sum / 301.0, 1e-12 * std::abs(r.mean));
  auto sorted = r.values;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(r.median, sorted[150]);
  EXPECT_EQ(r.quantiles.min, sorted.front());
  EXPECT_EQ(r.quantiles.max, sorted.back());
  // type 7 at p = 0.25 with n = 301 lands exactly on index 75
  EXPECT_EQ(r.quantiles.q25, sorted[75]);
  EXPECT_EQ(r.quantiles.q75, sorted[225]);
  EXPECT_EQ(r.level, 0.9);
}

TEST(CfPosterior, TooManyFailingDraws) {
  ModelParams good = paper_truth();
  ModelParams bad = good;
  bad.beta1 = -100.0;
  std::vector<ModelParams> rows(200, good);
  rows[0] = bad;
  CounterfactualQuery q;
  q.record = ns_device(good, 10);
  q.question = CounterfactualQuery::Question::FailureTime;
  const auto r = cf_posterior(q, draws_from_params(rows), {});
  EXPECT_EQ(r.failed, 1u);
  EXPECT_EQ(r.values.size(), 199u);
  rows[1] = rows[2] = bad;
  EXPECT_THROW(cf_posterior(q, draws_from_params(rows), {}), DrawFailureError);
}
