#pragma once

#include <span>
#include <vector>

namespace relscm {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Shortest contiguous interval of the sorted sample holding ceil(level * n)
/// values. Throws DomainError for level outside (0, 1) or an empty sample.
Interval hdi(std::span<const double> values, double level);

/// Linear-interpolation quantile (R type 7) of an ascending sample.
double quantile_sorted(std::span<const double> sorted, double p);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double level = 0.95;
  Interval hdi;
};

Summary summarize_values(std::span<const double> values, double level = 0.95);

/// Distribution summary of a sample: min, 5/25/50/75/95% quantiles, max, mean, sd.
struct QuantileTable {
  double min = 0, q05 = 0, q25 = 0, q50 = 0, q75 = 0, q95 = 0, max = 0, mean = 0, sd = 0;
};

QuantileTable quantile_table(std::span<const double> values);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1 denominator); zero for n < 2.
double sample_sd(std::span<const double> values);

}  // namespace relscm
