#pragma once

#include <cmath>
#include <numbers>
#include <span>

namespace relscm::density {

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

inline double normal_lpdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -kHalfLog2Pi - std::log(sd) - 0.5 * z * z;
}

/// Location-scale Student t log density.
inline double student_t_lpdf(double x, double df, double loc, double scale) {
  const double z = (x - loc) / scale;
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * std::numbers::pi) - std::log(scale) -
         0.5 * (df + 1.0) * std::log1p(z * z / df);
}

/// d/dx of student_t_lpdf.
inline double student_t_dlpdf(double x, double df, double loc, double scale) {
  const double d = x - loc;
  return -(df + 1.0) * d / (df * scale * scale + d * d);
}

/// Student t centred at zero, truncated to the positive half-line.
inline double half_student_t_lpdf(double x, double df, double scale) {
  if (!(x > 0.0)) return -INFINITY;
  return std::numbers::ln2 + student_t_lpdf(x, df, 0.0, scale);
}

inline double dirichlet_lpdf(std::span<const double> p, std::span<const double> lambda) {
  double lambda_sum = 0.0;
  double lp = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    lambda_sum += lambda[i];
    lp -= std::lgamma(lambda[i]);
    if (lambda[i] != 1.0) lp += (lambda[i] - 1.0) * std::log(p[i]);
  }
  return lp + std::lgamma(lambda_sum);
}

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace relscm::density
