#pragma once

#include <optional>
#include <vector>

#include "relscm/sampler.hpp"
#include "relscm/summary.hpp"
#include "relscm/types.hpp"

// Twin-network counterfactuals: the exogenous residual of an observed
// measurement is recovered under a parameter draw, then the same residual is
// pushed through the structural equation with some parents overridden.

namespace relscm {

/// u_t = y_t - mean_yt(y0, config, w_t) for t >= 1, and u_0 = y0 - mean_y0.
/// Throws DataError when y_t or y0 is missing.
double recover_residual(const DeviceRecord& record, int t, const ModelParams& theta, const FixedConstants& c);

/// Resistance measurement t would have shown at time `w` and humidity class
/// `x_H` (each defaulting to the factual value), keeping the device's y0 and
/// residual u_t. Overriding with the factual values returns y_t exactly.
double cf_outcome(const DeviceRecord& record, int t, std::optional<double> w, std::optional<int> x_H,
                  const ModelParams& theta, const FixedConstants& c);

/// cf_outcome with the time overridden. Throws DomainError for w < 0.
double cf_outcome_at_time(const DeviceRecord& record, int t, double w, const ModelParams& theta,
                          const FixedConstants& c);

/// cf_outcome with the humidity class overridden. Throws CardinalityError unless x_H is -1 or +1.
double cf_outcome_humidity(const DeviceRecord& record, int t, int x_H, const ModelParams& theta,
                           const FixedConstants& c);

/// NS time at which the trajectory through the factual last measurement
/// (t = 3) reaches the threshold: ((f - 1) y0 - u_3) gamma / slope_sum.
/// Throws ConfigError for AS records, NonFailingTrajectoryError when slope_sum <= 0.
double cf_failure_time(const DeviceRecord& record, const ModelParams& theta, const FixedConstants& c);

struct CounterfactualQuery {
  enum class Question { OutcomeUnderOverride, FailureTime };

  DeviceRecord record;
  int target = 3;                    ///< measurement index t in 1..3
  std::optional<double> time;        ///< w' override, kilohours
  std::optional<int> humidity;       ///< x_H' override, class -1 / +1
  Question question = Question::OutcomeUnderOverride;

  /// Throws ConfigError when an outcome query has no override, a failure-time
  /// query is not NS, or the target measurement is missing.
  void validate() const;
};

struct CounterfactualResult {
  std::vector<double> values;  ///< one per successful draw
  std::size_t failed = 0;
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  QuantileTable quantiles;
  Interval hdi;
  double level = 0.95;
};

/// Applies the query under every posterior draw. Draws failing with
/// NonFailingTrajectoryError are dropped and counted; more than 1% failed
/// raises DrawFailureError.
CounterfactualResult cf_posterior(const CounterfactualQuery& query, const PosteriorDraws& draws,
                                  const FixedConstants& c, double level = 0.95);

}  // namespace relscm
