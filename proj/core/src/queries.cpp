#include "relscm/queries.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "relscm/densities.hpp"
#include "relscm/datagen.hpp"
#include "relscm/errors.hpp"
#include "relscm/fit.hpp"
#include "relscm/structural.hpp"

namespace relscm {

namespace {

void check_simplex(const std::vector<double>& row, std::size_t n, const char* name) {
  if (row.size() != n) throw ConfigError(std::string("probability table ") + name + " is missing or has the wrong size");
  double sum = 0.0;
  for (double p : row) {
    if (!(p >= 0.0)) throw ConfigError(std::string("probability table ") + name + " has a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(std::string("probability table ") + name + " does not sum to one");
}

void check_tables(const ModelParams& theta) {
  const Cardinalities card = theta.cardinalities();
  check_simplex(theta.pi_H, Cardinalities::n_H, "pi_H");
  check_simplex(theta.pi_P, static_cast<std::size_t>(card.n_P), "pi_P");
  if (theta.pi_S.size() != Cardinalities::n_H || theta.pi_T.size() != Cardinalities::n_H) {
    throw ConfigError("probability tables pi_S / pi_T need one row per humidity level");
  }
  for (int h = 0; h < Cardinalities::n_H; ++h) {
    check_simplex(theta.pi_S[h], static_cast<std::size_t>(card.n_S), "pi_S");
    check_simplex(theta.pi_T[h], static_cast<std::size_t>(card.n_T), "pi_T");
  }
}

std::vector<int> levels(std::optional<int> assigned, int n) {
  if (assigned) return {*assigned};
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all[i] = i + 1;
  return all;
}

EstimandResult summarize_estimand(std::vector<double> values, double level) {
  EstimandResult r;
  r.summary = summarize_values(values, level);
  r.values = std::move(values);
  return r;
}

}  // namespace

void Intervention::validate(const Cardinalities& card) const {
  Configuration probe;
  probe.x_S = x_S.value_or(1);
  probe.x_T = x_T.value_or(1);
  probe.x_P = x_P.value_or(1);
  probe.x_H = x_H.value_or(-1);
  relscm::validate(probe, card);
}

double delta1(const Configuration& config, double w, const ModelParams& theta, const FixedConstants& c) {
  if (w < 0.0) throw DomainError("delta1: time must be nonnegative");
  return mean_increment(config, w, Regime::AS, theta, c);
}

double delta_contrast(Configuration a, Configuration b, int x_H, double w, const ModelParams& theta,
                      const FixedConstants& c) {
  a.x_H = x_H;
  b.x_H = x_H;
  return delta1(b, w, theta, c) - delta1(a, w, theta, c);
}

EstimandResult delta1_posterior(const Configuration& config, double w, const PosteriorDraws& draws,
                                const FixedConstants& c, double level) {
  std::vector<double> values;
  for (const auto& theta : draw_params(draws)) values.push_back(delta1(config, w, theta, c));
  return summarize_estimand(std::move(values), level);
}

EstimandResult delta_contrast_posterior(const Configuration& a, const Configuration& b, int x_H, double w,
                                        const PosteriorDraws& draws, const FixedConstants& c, double level) {
  std::vector<double> values;
  for (const auto& theta : draw_params(draws)) values.push_back(delta_contrast(a, b, x_H, w, theta, c));
  return summarize_estimand(std::move(values), level);
}

double reliability_known_y0(double t, double y0, const Configuration& config, Regime regime,
                            const ModelParams& theta, const FixedConstants& c) {
  if (!(theta.sigmaY > 0.0)) throw DomainError("reliability: sigmaY must be positive");
  const double mu = diff_mean(y0, config, t, regime, theta, c);
  return density::normal_cdf(-mu / theta.sigmaY);
}

double reliability_unknown_y0(double t, const Configuration& config, Regime regime, const ModelParams& theta,
                              const FixedConstants& c) {
  if (!(theta.sigmaY > 0.0) || theta.sigma0 < 0.0) throw DomainError("reliability: invalid noise scales");
  const double k = c.threshold_factor - 1.0;
  const double mu = mean_increment(config, t, regime, theta, c) - k * mean_y0(config, theta);
  const double sd = std::sqrt(theta.sigmaY * theta.sigmaY + k * k * theta.sigma0 * theta.sigma0);
  return density::normal_cdf(-mu / sd);
}

std::vector<ReliabilityPoint> reliability_curve(std::span<const double> grid, const Configuration& config,
                                                Regime regime, std::optional<double> y0,
                                                const PosteriorDraws& draws, const FixedConstants& c,
                                                double level) {
  const auto thetas = draw_params(draws);
  std::vector<ReliabilityPoint> out;
  std::vector<double> values(thetas.size());
  for (double t : grid) {
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      values[i] = y0 ? reliability_known_y0(t, *y0, config, regime, thetas[i], c)
                     : reliability_unknown_y0(t, config, regime, thetas[i], c);
    }
    out.push_back({t, summarize_values(values, level)});
  }
  return out;
}

double adjusted_outcome_density(double y_t, const Intervention& intervention, double y0, double w,
                                const ModelParams& theta, const FixedConstants& c) {
  check_tables(theta);
  const Cardinalities card = theta.cardinalities();
  intervention.validate(card);
  if (!(theta.sigmaY > 0.0) || !(theta.sigma0 > 0.0)) throw DomainError("density: noise scales must be positive");

  // joint weight of the unassigned factors, including the evidence carried by y0
  std::vector<double> log_w;
  std::vector<double> means;
  for (int h : levels(intervention.x_H ? std::optional<int>(humidity_level(*intervention.x_H)) : std::nullopt,
                      Cardinalities::n_H)) {
    const double lw_h = intervention.x_H ? 0.0 : std::log(theta.pi_H[h - 1]);
    for (int s : levels(intervention.x_S, card.n_S)) {
      const double lw_s = intervention.x_S ? 0.0 : std::log(theta.pi_S[h - 1][s - 1]);
      for (int t : levels(intervention.x_T, card.n_T)) {
        const double lw_t = intervention.x_T ? 0.0 : std::log(theta.pi_T[h - 1][t - 1]);
        for (int p : levels(intervention.x_P, card.n_P)) {
          const double lw_p = intervention.x_P ? 0.0 : std::log(theta.pi_P[p - 1]);
          const Configuration config{s, t, p, humidity_class(h)};
          const double lw = lw_h + lw_s + lw_t + lw_p + density::normal_lpdf(y0, mean_y0(config, theta), theta.sigma0);
          if (lw == -std::numeric_limits<double>::infinity()) continue;
          log_w.push_back(lw);
          means.push_back(mean_yt(y0, config, w, Regime::NS, theta, c));
        }
      }
    }
  }
  if (log_w.empty()) return 0.0;
  const double top = *std::max_element(log_w.begin(), log_w.end());
  double norm = 0.0;
  double dens = 0.0;
  for (std::size_t k = 0; k < log_w.size(); ++k) {
    const double wk = std::exp(log_w[k] - top);
    norm += wk;
    dens += wk * std::exp(density::normal_lpdf(y_t, means[k], theta.sigmaY));
  }
  return dens / norm;
}

FailureTimeResult predictive_failure_time(const Intervention& intervention, const PosteriorDraws& draws,
                                          const FixedConstants& c, std::uint64_t seed, std::size_t n_mc) {
  if (!intervention.full_design()) throw ConfigError("failure-time prediction needs x_S, x_T and x_P assigned");
  const auto thetas = draw_params(draws);
  if (thetas.empty()) throw ConfigError("no posterior draws");
  intervention.validate(thetas.front().cardinalities());
  if (n_mc == 0) n_mc = thetas.size();
  const double k = c.threshold_factor - 1.0;

  FailureTimeResult out;
  out.values.reserve(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    const ModelParams& theta = thetas[i % thetas.size()];
    Rng rng = make_rng(seed, i);
    Configuration config{*intervention.x_S, *intervention.x_T, *intervention.x_P, -1};
    if (intervention.x_H) {
      config.x_H = *intervention.x_H;
    } else {
      check_simplex(theta.pi_H, Cardinalities::n_H, "pi_H");
      config.x_H = humidity_class(sample_categorical(theta.pi_H, rng) + 1);
    }
    std::normal_distribution<double> n01(0.0, 1.0);
    const double u0 = theta.sigma0 * n01(rng);
    const double u3 = theta.sigmaY * n01(rng);
    const double slope = slope_sum(config, theta);
    if (!(slope > 0.0)) {
      ++out.flagged;
      continue;
    }
    const double y0 = mean_y0(config, theta) + u0;
    out.values.push_back((k * y0 - u3) * c.gamma / slope);
  }
  if (out.flagged * 100 > n_mc) {
    throw DrawFailureError(std::to_string(out.flagged) + " of " + std::to_string(n_mc) +
                               " draws have a nonpositive slope; more than 1% tolerated",
                           out.flagged, n_mc);
  }
  if (out.values.empty()) throw DrawFailureError("every draw was flagged", out.flagged, n_mc);
  out.table = quantile_table(out.values);
  return out;
}

CensorResult censor_classify(const DeviceRecord& record, const FixedConstants& c) {
  if (!record.has(0)) throw DataError("device " + record.id + ": y0 is missing");
  const double threshold = c.threshold_factor * record.y(0);
  double last = record.w(0);
  bool any = false;
  for (int t = 1; t < 4; ++t) {
    if (!record.has(t)) continue;
    any = true;
    if (record.y(t) >= threshold) return {CensorKind::IntervalCensored, last, record.w(t)};
    last = record.w(t);
  }
  if (!any) throw DataError("device " + record.id + ": no measurement after y0");
  return {CensorKind::RightCensored, last, std::numeric_limits<double>::infinity()};
}

}  // namespace relscm
