#include "relscm/counterfactual.hpp"

#include <string>

#include "relscm/errors.hpp"
#include "relscm/fit.hpp"
#include "relscm/structural.hpp"

namespace relscm {

namespace {

void require(const DeviceRecord& record, int t) {
  if (t < 0 || t > 3) throw DataError("measurement index must lie in 0..3");
  if (!record.has(0)) throw DataError("device " + record.id + ": y0 is missing");
  if (!record.has(t)) throw DataError("device " + record.id + ": measurement " + std::to_string(t) + " is missing");
}

}  // namespace

double recover_residual(const DeviceRecord& record, int t, const ModelParams& theta, const FixedConstants& c) {
  require(record, t);
  if (t == 0) return record.y(0) - mean_y0(record.config, theta);
  return record.y(t) - mean_yt(record.y(0), record.config, record.w(t), record.regime, theta, c);
}

double cf_outcome(const DeviceRecord& record, int t, std::optional<double> w, std::optional<int> x_H,
                  const ModelParams& theta, const FixedConstants& c) {
  require(record, t);
  if (t == 0) throw DataError("y0 has no time or humidity parent to override");
  if (w && *w < 0.0) throw DomainError("counterfactual time must be nonnegative");
  Configuration cf = record.config;
  if (x_H) {
    humidity_level(*x_H);
    cf.x_H = *x_H;
  }
  const double w_cf = w.value_or(record.w(t));
  // y_t + (cf mean - factual mean) == cf mean + u_t, exact when nothing changes
  const double shift = mean_increment(cf, w_cf, record.regime, theta, c) -
                       mean_increment(record.config, record.w(t), record.regime, theta, c);
  return record.y(t) + shift;
}

double cf_outcome_at_time(const DeviceRecord& record, int t, double w, const ModelParams& theta,
                          const FixedConstants& c) {
  return cf_outcome(record, t, w, std::nullopt, theta, c);
}

double cf_outcome_humidity(const DeviceRecord& record, int t, int x_H, const ModelParams& theta,
                           const FixedConstants& c) {
  return cf_outcome(record, t, std::nullopt, x_H, theta, c);
}

double cf_failure_time(const DeviceRecord& record, const ModelParams& theta, const FixedConstants& c) {
  if (record.regime != Regime::NS) throw ConfigError("counterfactual failure time is defined for NS records only");
  const double slope = slope_sum(record.config, theta);
  if (!(slope > 0.0)) throw NonFailingTrajectoryError("slope_sum is not positive; the threshold is never reached");
  const double u3 = recover_residual(record, 3, theta, c);
  return ((c.threshold_factor - 1.0) * record.y(0) - u3) * c.gamma / slope;
}

void CounterfactualQuery::validate() const {
  if (target < 1 || target > 3) throw ConfigError("counterfactual target must be a measurement index in 1..3");
  if (question == Question::OutcomeUnderOverride) {
    if (!time && !humidity) throw ConfigError("an outcome query needs a time or humidity override");
    if (!record.has(target)) throw ConfigError("the target measurement is not observed");
  } else {
    if (record.regime != Regime::NS) throw ConfigError("failure-time queries require an NS record");
    if (!record.has(3)) throw ConfigError("failure-time queries need the measurement at t = 3");
  }
  if (!record.has(0)) throw ConfigError("the factual record has no y0");
  if (humidity) humidity_level(*humidity);
  if (time && *time < 0.0) throw ConfigError("counterfactual time must be nonnegative");
}

CounterfactualResult cf_posterior(const CounterfactualQuery& query, const PosteriorDraws& draws,
                                  const FixedConstants& c, double level) {
  query.validate();
  const auto thetas = draw_params(draws);
  if (thetas.empty()) throw ConfigError("no posterior draws");
  validate(query.record.config, thetas.front().cardinalities());

  CounterfactualResult out;
  out.level = level;
  out.values.reserve(thetas.size());
  for (const auto& theta : thetas) {
    try {
      out.values.push_back(query.question == CounterfactualQuery::Question::FailureTime
                               ? cf_failure_time(query.record, theta, c)
                               : cf_outcome(query.record, query.target, query.time, query.humidity, theta, c));
    } catch (const NonFailingTrajectoryError&) {
      ++out.failed;
    }
  }
  if (out.failed * 100 > thetas.size() || out.values.empty()) {
    throw DrawFailureError(std::to_string(out.failed) + " of " + std::to_string(thetas.size()) +
                               " draws failed; more than 1% tolerated",
                           out.failed, thetas.size());
  }
  out.quantiles = quantile_table(out.values);
  out.mean = out.quantiles.mean;
  out.median = out.quantiles.q50;
  out.sd = out.quantiles.sd;
  out.hdi = hdi(out.values, level);
  return out;
}

}  // namespace relscm
