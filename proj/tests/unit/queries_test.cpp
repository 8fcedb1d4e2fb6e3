#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "relscm/errors.hpp"
#include "relscm/queries.hpp"
#include "test_support.hpp"

using namespace relscm;
using namespace relscm::testing;
using boost::math::quadrature::gauss_kronrod;

namespace {

const Configuration kBase{1, 1, 1, -1};

double oracle_delta1(const Configuration& cfg, double w, const ModelParams& t, const FixedConstants& c) {
  const double cubic = w > c.psi ? std::pow(w - c.psi, c.tau) : 0.0;
  return oracle_slope(cfg, t) * w + oracle_cubic(cfg, t) * cubic;
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 10, tol);
}

double normal_pdf(double x, double m, double s) { return std::exp(oracle_normal_lpdf(x, m, s)); }

}  // namespace

// ---- delta1 and contrasts ------------------------------------------------------

TEST(Delta1, ZeroAtOrigin) { EXPECT_EQ(delta1(kBase, 0.0, paper_truth(), {}), 0.0); }

TEST(Delta1, DefaultTruthTableValues) {
  const ModelParams t = paper_truth();
  const FixedConstants c;
  EXPECT_NEAR(oracle_slope(kBase, t), 10.18, 1e-12);
  EXPECT_NEAR(oracle_cubic(kBase, t), 30.99, 1e-12);
  EXPECT_NEAR(delta1(kBase, 0.72, t, c), 7.33, 0.02);
  // 10.18 * 3.6 + 30.99 * 1.6^3
  EXPECT_NEAR(delta1(kBase, 3.6, t, c), 10.18 * 3.6 + 30.99 * 4.096, 1e-10);
  EXPECT_NEAR(delta1(kBase, 3.6, t, c), 163.58, 0.05);
}

TEST(Delta1, NegativeTimeRejected) { EXPECT_THROW(delta1(kBase, -0.1, paper_truth(), {}), DomainError); }

TEST(Delta1, MatchesOracleAndSplitsAtKnot) {
  Rng rng(61);
  const FixedConstants c;
  std::uniform_real_distribution<double> uw(0.0, 5.0);
  for (int rep = 0; rep < 500; ++rep) {
    const ModelParams t = random_params(rng);
    const Configuration cfg = random_config(rng);
    const double w = uw(rng);
    const double got = delta1(cfg, w, t, c);
    EXPECT_NEAR(got, oracle_delta1(cfg, w, t, c), 1e-10 * std::max(1.0, std::abs(got)));
    if (w <= c.psi) {
      EXPECT_NEAR(got, oracle_slope(cfg, t) * w, 1e-12 * std::max(1.0, std::abs(got)));
    }
  }
}

TEST(DeltaContrast, OneFactorSurfaceContrast) {
  const ModelParams t = paper_truth();
  EXPECT_NEAR(delta_contrast({1, 1, 1, -1}, {2, 1, 1, -1}, -1, 0.72, t, {}), 0.2 * 0.72, 1e-12);
}

TEST(DeltaContrast, IdentityAntisymmetryTelescoping) {
  Rng rng(62);
  const FixedConstants c;
  std::uniform_real_distribution<double> uw(0.0, 5.0);
  for (int rep = 0; rep < 300; ++rep) {
    const ModelParams t = random_params(rng);
    const Configuration a = random_config(rng), b = random_config(rng), d = random_config(rng);
    const int h = random_config(rng).x_H;
    const double w = uw(rng);
    EXPECT_EQ(delta_contrast(a, a, h, w, t, c), 0.0);
    const double ab = delta_contrast(a, b, h, w, t, c);
    EXPECT_NEAR(ab, -delta_contrast(b, a, h, w, t, c), 1e-12 * std::max(1.0, std::abs(ab)));
    const double bd = delta_contrast(b, d, h, w, t, c);
    const double ad = delta_contrast(a, d, h, w, t, c);
    EXPECT_NEAR(ab + bd, ad, 1e-9 * std::max(1.0, std::abs(ad)));
  }
}

TEST(DeltaContrast, CommonHumidityOverridesConfigs) {
  const ModelParams t = paper_truth();
  const FixedConstants c;
  // x_H in the configurations is replaced by the common class
  EXPECT_DOUBLE_EQ(delta_contrast({1, 2, 3, 1}, {2, 2, 3, -1}, -1, 3.0, t, c),
                   oracle_delta1({2, 2, 3, -1}, 3.0, t, c) - oracle_delta1({1, 2, 3, -1}, 3.0, t, c));
}

TEST(DeltaPosterior, PerDrawValuesAndSummary) {
  Rng rng(63);
  std::vector<ModelParams> rows;
  for (int i = 0; i < 200; ++i) rows.push_back(random_params(rng));
  const PosteriorDraws d = draws_from_params(rows, 2);
  const FixedConstants c;
  const EstimandResult r = delta1_posterior(kBase, 3.0, d, c);
  ASSERT_EQ(r.values.size(), 200u);
  for (int i = 0; i < 200; ++i) EXPECT_NEAR(r.values[i], oracle_delta1(kBase, 3.0, rows[i], c), 1e-9);
  const Summary s = summarize_values(r.values, 0.95);
  EXPECT_DOUBLE_EQ(r.summary.mean, s.mean);
  EXPECT_DOUBLE_EQ(r.summary.hdi.lo, s.hdi.lo);

  const EstimandResult z = delta_contrast_posterior({2, 3, 4, 1}, {2, 3, 4, 1}, 1, 3.0, d, c);
  for (double v : z.values) EXPECT_EQ(v, 0.0);
}

// ---- reliability -----------------------------------------------------------------

TEST(Reliability, KnownY0AtZeroIsOne) {
  const ModelParams t = paper_truth();
  EXPECT_NEAR(reliability_known_y0(0.0, 1000.0, kBase, Regime::AS, t, {}), 1.0, 1e-15);
}

TEST(Reliability, MedianCrossingIsHalf) {
  const ModelParams t = paper_truth();
  const FixedConstants c;
  // NS: y0 + s (t / gamma) = 1.1 y0
  const double y0 = 1000.0;
  const double t_star = 0.1 * y0 * c.gamma / oracle_slope(kBase, t);
  EXPECT_NEAR(reliability_known_y0(t_star, y0, kBase, Regime::NS, t, c), 0.5, 1e-12);
}

TEST(Reliability, KnownY0MatchesQuadrature) {
  Rng rng(64);
  const FixedConstants c;
  std::uniform_real_distribution<double> ut(0.0, 120.0);
  for (int rep = 0; rep < 60; ++rep) {
    const ModelParams t = random_params(rng);
    const Configuration cfg = random_config(rng);
    const Regime r = rep % 2 ? Regime::NS : Regime::AS;
    const double w = r == Regime::NS ? ut(rng) : ut(rng) / 20.0;
    const double y0 = oracle_mean_y0(cfg, t);
    const double mu = oracle_mean_yt(y0, cfg, w, r, t, c) - 1.1 * y0;
    const double lo = std::min(mu - 40.0 * t.sigmaY, 0.0);
    const double q = integrate([&](double x) { return normal_pdf(x, mu, t.sigmaY); }, lo, 0.0);
    EXPECT_NEAR(reliability_known_y0(w, y0, cfg, r, t, c), q, 1e-8);
  }
}

TEST(Reliability, UnknownY0VarianceAndMean) {
  ModelParams t = paper_truth();
  t.sigmaY = 0.5;
  t.sigma0 = 1.0;
  const FixedConstants c;
  const double var = t.sigmaY * t.sigmaY + 0.01 * t.sigma0 * t.sigma0;
  EXPECT_NEAR(var, 0.26, 1e-15);
  const double w = 40.0;
  const double mu = oracle_slope(kBase, t) * w / c.gamma - 0.1 * oracle_mean_y0(kBase, t);
  EXPECT_NEAR(reliability_unknown_y0(w, kBase, Regime::NS, t, c), oracle_normal_cdf(-mu / std::sqrt(0.26)), 1e-14);
}

TEST(Reliability, UnknownMatchesKnownWhenSigma0Zero) {
  Rng rng(65);
  const FixedConstants c;
  for (int rep = 0; rep < 50; ++rep) {
    ModelParams t = random_params(rng);
    t.sigma0 = 0.0;
    const Configuration cfg = random_config(rng);
    const double w = 10.0 * rep / 50.0;
    for (Regime r : {Regime::AS, Regime::NS}) {
      EXPECT_NEAR(reliability_unknown_y0(w, cfg, r, t, c),
                  reliability_known_y0(w, oracle_mean_y0(cfg, t), cfg, r, t, c), 1e-14);
    }
  }
}

TEST(Reliability, MonotoneBoundedContinuous) {
  const ModelParams t = paper_truth();
  const FixedConstants c;
  for (Regime r : {Regime::NS, Regime::AS}) {
    double prev_u = 2.0, prev_k = 2.0;
    for (int i = 0; i < 200; ++i) {
      const double w = 60.0 * i / 199.0;
      const double u = reliability_unknown_y0(w, kBase, r, t, c);
      const double k = reliability_known_y0(w, 1001.0, kBase, r, t, c);
      EXPECT_LE(u, prev_u);
      EXPECT_LE(k, prev_k);
      EXPECT_GE(u, 0.0);
      EXPECT_LE(u, 1.0);
      prev_u = u;
      prev_k = k;
    }
  }
  // no jump across the knot
  const double below = reliability_unknown_y0(c.psi - 1e-12, kBase, Regime::AS, t, c);
  const double above = reliability_unknown_y0(c.psi + 1e-12, kBase, Regime::AS, t, c);
  EXPECT_LE(std::abs(below - above), 1e-9);
}

TEST(Reliability, Errors) {
  ModelParams t = paper_truth();
  t.sigmaY = 0.0;
  EXPECT_THROW(reliability_known_y0(1.0, 1000.0, kBase, Regime::NS, t, {}), DomainError);
  EXPECT_THROW(reliability_unknown_y0(1.0, kBase, Regime::NS, t, {}), DomainError);
}

TEST(Reliability, CurveSummariesPerGridPoint) {
  const ModelParams t = paper_truth();
  const PosteriorDraws d = repeated_draws(t, 120);
  const std::vector<double> grid{0.0, 20.0, 40.0, 60.0};
  const auto curve = reliability_curve(grid, kBase, Regime::NS, std::nullopt, d, {});
  ASSERT_EQ(curve.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(curve[i].t, grid[i]);
    EXPECT_NEAR(curve[i].summary.mean, reliability_unknown_y0(grid[i], kBase, Regime::NS, t, {}), 1e-14);
    EXPECT_NEAR(curve[i].summary.sd, 0.0, 1e-14);
  }
}

// ---- back-door density -----------------------------------------------------------

TEST(AdjustedDensity, DegenerateHumidityIsSingleComponent) {
  ModelParams t = paper_truth();
  t.pi_H = {0.0, 1.0};
  const FixedConstants c;
  const Intervention iv{2, 3, 4, std::nullopt};
  const Configuration cfg{2, 3, 4, 1};
  const double y0 = 1001.0, w = 30.0;
  const double m = oracle_mean_yt(y0, cfg, w, Regime::NS, t, c);
  for (double y : {m - 1.0, m, m + 0.3}) {
    EXPECT_NEAR(adjusted_outcome_density(y, iv, y0, w, t, c), normal_pdf(y, m, t.sigmaY), 1e-13);
  }
}

TEST(AdjustedDensity, IntegratesToOne) {
  Rng rng(66);
  const FixedConstants c;
  for (int rep = 0; rep < 20; ++rep) {
    const ModelParams t = random_params(rng);
    const Configuration cfg = random_config(rng);
    Intervention iv{cfg.x_S, cfg.x_T, cfg.x_P, std::nullopt};
    if (rep % 3 == 1) iv.x_T.reset();
    if (rep % 3 == 2) iv = Intervention{cfg.x_S, std::nullopt, std::nullopt, std::nullopt};
    const double y0 = oracle_mean_y0(cfg, t) + 0.3;
    const double w = 36.0;
    const double center = y0 + t.beta1 * w / c.gamma;
    const double half = 20.0 + 15.0 * t.sigmaY;
    const double mass =
        integrate([&](double y) { return adjusted_outcome_density(y, iv, y0, w, t, c); }, center - half, center + half);
    EXPECT_NEAR(mass, 1.0, 1e-6) << rep;
  }
}

TEST(AdjustedDensity, MatchesMutilatedModelSimulation) {
  // strongly separated humidity components so the mixture is visibly bimodal
  ModelParams t = paper_truth();
  t.delta1_H = {-3.0, 3.0};
  t.pi_H = {0.3, 0.7};
  t.sigmaY = 0.5;
  const FixedConstants c;
  const Intervention iv{2, 1, 3, std::nullopt};
  const double y0 = 1000.0, w = 36.0;
  Rng rng(67);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> uu;
  const int n = 100000;
  std::vector<double> ys(n);
  for (double& y : ys) {
    const int xh = uu(rng) < t.pi_H[0] ? -1 : 1;
    const Configuration cfg{2, 1, 3, xh};
    y = y0 + oracle_slope(cfg, t) * w / c.gamma + t.sigmaY * nd(rng);
  }
  const double lo = y0 + 30.0, hi = y0 + 45.0;
  const int bins = 50;
  const double width = (hi - lo) / bins;
  int outside = 0;
  for (int b = 0; b < bins; ++b) {
    const double a = lo + b * width;
    const double p = integrate([&](double y) { return adjusted_outcome_density(y, iv, y0, w, t, c); }, a, a + width, 1e-9);
    const auto k = std::count_if(ys.begin(), ys.end(), [&](double y) { return y >= a && y < a + width; });
    const double phat = static_cast<double>(k) / n;
    const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
    if (std::abs(phat - p) > 3.0 * se) ++outside;
  }
  // a 3-SE band admits roughly 0.3% misses per bin
  EXPECT_LE(outside, 2);
}

TEST(AdjustedDensity, MissingTableIsConfigError) {
  ModelParams t = paper_truth();
  t.pi_H.clear();
  EXPECT_THROW(adjusted_outcome_density(1030.0, Intervention{1, 1, 1, std::nullopt}, 1000.0, 36.0, t, {}),
               ConfigError);
}

// ---- predictive failure time -------------------------------------------------------

TEST(FailureTime, NoiselessClosedForm) {
  ModelParams t = paper_truth();
  t.sigma0 = 0.0;
  t.sigmaY = 0.0;
  t.pi_H = {1.0, 0.0};
  const FixedConstants c;
  const PosteriorDraws d = repeated_draws(t, 50);
  for (const Configuration cfg : {Configuration{1, 1, 4, -1}, Configuration{3, 3, 3, -1}}) {
    const auto r = predictive_failure_time({cfg.x_S, cfg.x_T, cfg.x_P, std::nullopt}, d, c, 5);
    const double y0 = oracle_mean_y0(cfg, t);
    const double expected = 100.0 * c.gamma * (y0 / 1000.0) / oracle_slope(cfg, t);
    ASSERT_EQ(r.values.size(), 50u);
    for (double v : r.values) EXPECT_NEAR(v, expected, 1e-12 * expected);
    EXPECT_EQ(r.flagged, 0u);
  }
}

TEST(FailureTime, SeparatedIntervalsForDistinctSlopes) {
  const ModelParams t = paper_truth();
  const FixedConstants c;
  const Configuration a{1, 1, 4, -1}, b{3, 3, 3, -1};
  // both humidity classes differ by at least 5% in slope
  for (int h : {-1, 1}) {
    Configuration ah = a, bh = b;
    ah.x_H = bh.x_H = h;
    ASSERT_GE(std::abs(oracle_slope(ah, t) - oracle_slope(bh, t)) / oracle_slope(ah, t), 0.05);
  }
  const PosteriorDraws d = repeated_draws(t, 4000);
  const auto ra = predictive_failure_time({a.x_S, a.x_T, a.x_P, std::nullopt}, d, c, 7);
  const auto rb = predictive_failure_time({b.x_S, b.x_T, b.x_P, std::nullopt}, d, c, 7);
  EXPECT_TRUE(ra.table.q95 < rb.table.q05 || rb.table.q95 < ra.table.q05);
}

TEST(FailureTime, DeterministicAndOrderFree) {
  Rng rng(68);
  std::vector<ModelParams> rows;
  for (int i = 0; i < 100; ++i) rows.push_back(random_params(rng));
  const PosteriorDraws d = draws_from_params(rows, 2);
  const Intervention iv{1, 2, 3, std::nullopt};
  const auto a = predictive_failure_time(iv, d, {}, 9);
  const auto b = predictive_failure_time(iv, d, {}, 9);
  EXPECT_EQ(a.values, b.values);
  const auto more = predictive_failure_time(iv, d, {}, 9, 300);
  EXPECT_EQ(more.values.size(), 300u);
  // the first 100 rows use the same streams
  EXPECT_TRUE(std::equal(a.values.begin(), a.values.end(), more.values.begin()));
}

TEST(FailureTime, FlaggedDraws) {
  ModelParams good = paper_truth();
  ModelParams bad = good;
  bad.beta1 = -50.0;
  std::vector<ModelParams> rows(1000, good);
  for (int i = 0; i < 5; ++i) rows[i * 100] = bad;
  const Intervention iv{1, 1, 1, std::nullopt};
  const auto r = predictive_failure_time(iv, draws_from_params(rows), {}, 3);
  EXPECT_EQ(r.flagged, 5u);
  EXPECT_EQ(r.values.size(), 995u);
  for (int i = 0; i < 20; ++i) rows[i * 50] = bad;
  EXPECT_THROW(predictive_failure_time(iv, draws_from_params(rows), {}, 3), DrawFailureError);
}

TEST(FailureTime, RequiresFullDesign) {
  const PosteriorDraws d = repeated_draws(paper_truth(), 10);
  EXPECT_THROW(predictive_failure_time(Intervention{1, 1, std::nullopt, std::nullopt}, d, {}, 1), ConfigError);
}

// ---- censoring ------------------------------------------------------------------------

TEST(Censor, RightCensoredWhenNeverCrossed) {
  const auto rec = make_record(kBase, Regime::NS, {0, 7.2, 21.6, 36.0}, {1000, 1010, 1050, 1090});
  const CensorResult r = censor_classify(rec);
  EXPECT_EQ(r.kind, CensorKind::RightCensored);
  EXPECT_EQ(r.lo, 36.0);
  EXPECT_EQ(r.hi, std::numeric_limits<double>::infinity());
}

TEST(Censor, IntervalBetweenSecondAndThird) {
  const auto rec = make_record(kBase, Regime::NS, {0, 7.2, 21.6, 36.0}, {1000, 1010, 1050, 1120});
  const CensorResult r = censor_classify(rec);
  EXPECT_EQ(r.kind, CensorKind::IntervalCensored);
  EXPECT_EQ(r.lo, 21.6);
  EXPECT_EQ(r.hi, 36.0);
}

TEST(Censor, TieCountsAsFailed) {
  const double y0 = 1000.0;
  const auto rec = make_record(kBase, Regime::NS, {0, 7.2, 21.6, 36.0}, {y0, 1.1 * y0, 1200, 1300});
  const CensorResult r = censor_classify(rec);
  EXPECT_EQ(r.kind, CensorKind::IntervalCensored);
  EXPECT_EQ(r.lo, 0.0);
  EXPECT_EQ(r.hi, 7.2);
}

TEST(Censor, MissingMeasurements) {
  auto rec = make_record(kBase, Regime::NS, {0, 7.2}, {1000, 1010});
  EXPECT_EQ(censor_classify(rec).lo, 7.2);
  rec.resistances[0].reset();
  EXPECT_THROW(censor_classify(rec), DataError);
  const auto only0 = make_record(kBase, Regime::NS, {0}, {1000});
  EXPECT_THROW(censor_classify(only0), DataError);
}
