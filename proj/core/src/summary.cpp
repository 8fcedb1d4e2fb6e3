#include "relscm/summary.hpp"

#include <algorithm>
#include <cmath>

#include "relscm/errors.hpp"

namespace relscm {

double mean(std::span<const double> values) {
  if (values.empty()) throw DomainError("mean of an empty sample");
  // shifted by the first value: exact for constant samples, less cancellation otherwise
  const double pivot = values.front();
  double s = 0.0;
  for (double v : values) s += v - pivot;
  return pivot + s / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double pivot = values.front();
  double s = 0.0;
  for (double v : values) s += v - pivot;
  const double m = s / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - pivot - m) * (v - pivot - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

Interval hdi(std::span<const double> values, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("HDI level must lie in (0, 1)");
  if (values.empty()) throw DomainError("HDI of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const auto k = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(level * static_cast<double>(n))));
  Interval best{sorted.front(), sorted[k - 1]};
  for (std::size_t i = 1; i + k <= n; ++i) {
    if (sorted[i + k - 1] - sorted[i] < best.hi - best.lo) best = {sorted[i], sorted[i + k - 1]};
  }
  return best;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Summary summarize_values(std::span<const double> values, double level) {
  Summary s;
  s.mean = mean(values);
  s.sd = sample_sd(values);
  s.level = level;
  s.hdi = hdi(values, level);
  return s;
}

QuantileTable quantile_table(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  QuantileTable q;
  q.min = sorted.front();
  q.max = sorted.back();
  q.q05 = quantile_sorted(sorted, 0.05);
  q.q25 = quantile_sorted(sorted, 0.25);
  q.q50 = quantile_sorted(sorted, 0.50);
  q.q75 = quantile_sorted(sorted, 0.75);
  q.q95 = quantile_sorted(sorted, 0.95);
  q.mean = mean(values);
  q.sd = sample_sd(values);
  return q;
}

}  // namespace relscm
