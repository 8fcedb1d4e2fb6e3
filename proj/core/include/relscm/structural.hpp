#pragma once

#include "relscm/types.hpp"

// Structural equations of the resistance model. Every function here is pure;
// exogenous noise enters only through the data generator or through
// residuals recovered from observations.

namespace relscm {

/// Mean initial resistance h_0: mu0 plus the surface, type and pin effects.
double mean_y0(const Configuration& config, const ModelParams& theta);

/// Coefficient of transformed time: beta1 plus the four delta1 effects.
double slope_sum(const Configuration& config, const ModelParams& theta);

/// Coefficient of the post-knot power term: beta2 plus the four delta2 effects.
double cubic_sum(const Configuration& config, const ModelParams& theta);

/// Elapsed time on the AS clock: w under AS, w / gamma under NS.
double time_transform(double w, Regime regime, const FixedConstants& c);

/// (w - psi)^tau for w > psi under AS, zero otherwise. Zero for every w under NS.
double knot_basis(double w, Regime regime, const FixedConstants& c);

/// Degradation increment h_D(w): slope_sum * time_transform + cubic_sum * knot_basis.
double mean_increment(const Configuration& config, double w, Regime regime,
                      const ModelParams& theta, const FixedConstants& c);

/// Expected resistance at time w for a device with initial resistance y0.
double mean_yt(double y0, const Configuration& config, double w, Regime regime,
               const ModelParams& theta, const FixedConstants& c);

/// Expected distance to the failure threshold, mean_yt - threshold_factor * y0.
/// Negative while the device is expected to be operational.
double diff_mean(double y0, const Configuration& config, double w, Regime regime,
                 const ModelParams& theta, const FixedConstants& c);

}  // namespace relscm
