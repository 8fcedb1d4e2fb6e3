#include "relscm/structural.hpp"

#include <cmath>
#include <string>

#include "relscm/errors.hpp"

namespace relscm {

namespace {

double effect(const std::vector<double>& v, int level, const char* name) {
  if (level < 1 || level > static_cast<int>(v.size())) {
    throw CardinalityError(std::string(name) + " level " + std::to_string(level) + " outside 1.." +
                           std::to_string(v.size()));
  }
  return v[level - 1];
}

void check_time(double w) {
  if (!(w >= 0.0)) throw DomainError("time must be nonnegative, got " + std::to_string(w));
}

}  // namespace

double mean_y0(const Configuration& config, const ModelParams& theta) {
  return theta.mu0 + effect(theta.alpha_S, config.x_S, "x_S") +
         effect(theta.alpha_T, config.x_T, "x_T") + effect(theta.alpha_P, config.x_P, "x_P");
}

double slope_sum(const Configuration& config, const ModelParams& theta) {
  return theta.beta1 + effect(theta.delta1_S, config.x_S, "x_S") +
         effect(theta.delta1_T, config.x_T, "x_T") + effect(theta.delta1_P, config.x_P, "x_P") +
         effect(theta.delta1_H, config.h_level(), "x_H");
}

double cubic_sum(const Configuration& config, const ModelParams& theta) {
  return theta.beta2 + effect(theta.delta2_S, config.x_S, "x_S") +
         effect(theta.delta2_T, config.x_T, "x_T") + effect(theta.delta2_P, config.x_P, "x_P") +
         effect(theta.delta2_H, config.h_level(), "x_H");
}

double time_transform(double w, Regime regime, const FixedConstants& c) {
  check_time(w);
  return regime == Regime::AS ? w : w / c.gamma;
}

double knot_basis(double w, Regime regime, const FixedConstants& c) {
  check_time(w);
  if (regime != Regime::AS || !(w > c.psi)) return 0.0;
  return std::pow(w - c.psi, c.tau);
}

double mean_increment(const Configuration& config, double w, Regime regime,
                      const ModelParams& theta, const FixedConstants& c) {
  const double linear = slope_sum(config, theta) * time_transform(w, regime, c);
  const double basis = knot_basis(w, regime, c);
  if (basis == 0.0) return linear;
  return linear + cubic_sum(config, theta) * basis;
}

double mean_yt(double y0, const Configuration& config, double w, Regime regime,
               const ModelParams& theta, const FixedConstants& c) {
  return y0 + mean_increment(config, w, regime, theta, c);
}

double diff_mean(double y0, const Configuration& config, double w, Regime regime,
                 const ModelParams& theta, const FixedConstants& c) {
  return mean_yt(y0, config, w, regime, theta, c) - c.threshold_factor * y0;
}

}  // namespace relscm
