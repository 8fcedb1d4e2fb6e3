#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "relscm/errors.hpp"
#include "relscm/summary.hpp"

using namespace relscm;

namespace {

// R type 7 written from its definition: h = (n - 1) p, interpolate x[floor h], x[floor h + 1]
double oracle_type7(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

// brute force over every window of the required size
Interval oracle_hdi(std::vector<double> x, double level) {
  std::sort(x.begin(), x.end());
  const auto k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(x.size())));
  Interval best{x.front(), x.back()};
  for (std::size_t i = 0; i + k <= x.size(); ++i) {
    if (x[i + k - 1] - x[i] < best.hi - best.lo) best = {x[i], x[i + k - 1]};
  }
  return best;
}

}  // namespace

TEST(Quantile, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(x, 0.1), 1.4);
}

TEST(Quantile, MatchesOracleOnRandomSamples) {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> len(1, 60);
  std::normal_distribution<double> nd(0, 10);
  std::uniform_real_distribution<double> up(0, 1);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<double> x(static_cast<std::size_t>(len(rng)));
    for (double& v : x) v = nd(rng);
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double p = up(rng);
    EXPECT_NEAR(quantile_sorted(sorted, p), oracle_type7(x, p), 1e-12);
  }
}

TEST(Hdi, MatchesBruteForce) {
  std::mt19937_64 rng(52);
  std::gamma_distribution<double> g(2.0, 1.0);
  std::uniform_real_distribution<double> ul(0.05, 0.99);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(137);
    for (double& v : x) v = g(rng);
    const double level = ul(rng);
    const Interval a = hdi(x, level);
    const Interval b = oracle_hdi(x, level);
    EXPECT_NEAR(a.hi - a.lo, b.hi - b.lo, 1e-12);
    const auto inside = std::count_if(x.begin(), x.end(), [&](double v) { return v >= a.lo && v <= a.hi; });
    EXPECT_GE(inside, static_cast<long>(std::ceil(level * 137)));
  }
}

TEST(Hdi, SymmetricSampleIsNearEqualTailed) {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> nd;
  std::vector<double> x(20000);
  for (double& v : x) v = nd(rng);
  const Interval h = hdi(x, 0.9);
  std::sort(x.begin(), x.end());
  EXPECT_NEAR(h.lo, quantile_sorted(x, 0.05), 0.05);
  EXPECT_NEAR(h.hi, quantile_sorted(x, 0.95), 0.05);
}

TEST(Hdi, Errors) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_THROW(hdi(x, 0.0), DomainError);
  EXPECT_THROW(hdi(x, 1.0), DomainError);
  EXPECT_THROW(hdi(std::vector<double>{}, 0.5), DomainError);
}

TEST(Summary, MomentsAndTable) {
  const std::vector<double> x{4, 1, 3, 2, 5};
  EXPECT_DOUBLE_EQ(mean(x), 3.0);
  EXPECT_DOUBLE_EQ(sample_sd(x), std::sqrt(2.5));
  EXPECT_EQ(sample_sd(std::vector<double>{7.0}), 0.0);
  const QuantileTable t = quantile_table(x);
  EXPECT_EQ(t.min, 1.0);
  EXPECT_EQ(t.max, 5.0);
  EXPECT_DOUBLE_EQ(t.q50, 3.0);
  EXPECT_DOUBLE_EQ(t.q25, 2.0);
  EXPECT_DOUBLE_EQ(t.q05, 1.2);
  const Summary s = summarize_values(x, 0.8);
  EXPECT_EQ(s.level, 0.8);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
}
