#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relscm/sampler.hpp"
#include "relscm/summary.hpp"
#include "relscm/types.hpp"

namespace relscm {

/// do() assignments. Unassigned factors are marginalized over the model's
/// probability tables; x_H is a humidity class (-1 / +1).
struct Intervention {
  std::optional<int> x_S, x_T, x_P, x_H;

  /// Throws CardinalityError on an assigned level outside `card`.
  void validate(const Cardinalities& card) const;
  bool full_design() const { return x_S && x_T && x_P; }
};

struct EstimandResult {
  std::vector<double> values;  ///< one per posterior draw
  Summary summary;
};

/// Expected AS increase of resistance at w: slope_sum * w + cubic_sum * (w - psi)^tau_+.
/// Throws DomainError for w < 0.
double delta1(const Configuration& config, double w, const ModelParams& theta, const FixedConstants& c);

/// delta1(b) - delta1(a), with both configurations taking humidity class x_H.
double delta_contrast(Configuration a, Configuration b, int x_H, double w, const ModelParams& theta,
                      const FixedConstants& c);

EstimandResult delta1_posterior(const Configuration& config, double w, const PosteriorDraws& draws,
                                const FixedConstants& c, double level = 0.95);
EstimandResult delta_contrast_posterior(const Configuration& a, const Configuration& b, int x_H, double w,
                                        const PosteriorDraws& draws, const FixedConstants& c,
                                        double level = 0.95);

/// Probability that a device with initial resistance y0 is still below the
/// failure threshold at time t: Phi(-diff_mean / sigmaY).
double reliability_known_y0(double t, double y0, const Configuration& config, Regime regime,
                            const ModelParams& theta, const FixedConstants& c);

/// As above with y0 integrated out: mean h_D - (f - 1) h_0 and variance
/// sigmaY^2 + (f - 1)^2 sigma0^2, f being the threshold factor.
double reliability_unknown_y0(double t, const Configuration& config, Regime regime, const ModelParams& theta,
                              const FixedConstants& c);

/// Posterior reliability at every grid time. `y0` empty selects the unknown-y0 form.
struct ReliabilityPoint {
  double t = 0.0;
  Summary summary;
};
std::vector<ReliabilityPoint> reliability_curve(std::span<const double> grid, const Configuration& config,
                                                Regime regime, std::optional<double> y0,
                                                const PosteriorDraws& draws, const FixedConstants& c,
                                                double level = 0.95);

/// Interventional density of the NS outcome y_t at time w given the device's
/// initial resistance y0: a normal mixture over the unassigned factors. With
/// x_S, x_T, x_P all assigned it is the back-door sum over humidity weighted
/// by pi_H. Unassigned x_T / x_P are weighted by their tables and by the
/// likelihood of y0. Throws ConfigError when a needed probability table is
/// missing or malformed.
double adjusted_outcome_density(double y_t, const Intervention& intervention, double y0, double w,
                                const ModelParams& theta, const FixedConstants& c);

struct FailureTimeResult {
  std::vector<double> values;  ///< kilohours, flagged draws excluded
  std::size_t flagged = 0;     ///< draws whose sampled slope was not positive
  QuantileTable table;
};

/// Predictive NS failure time under do(x_S, x_T, x_P): for each of n_mc draws
/// (cycling through the posterior rows, n_mc = 0 meaning one per row) sample
/// x_H from pi_H, u0 and u3, and solve the linear trajectory for the
/// threshold crossing. Row i uses the stream derive_seed(seed, i). Throws
/// DrawFailureError when more than 1% of draws are flagged.
FailureTimeResult predictive_failure_time(const Intervention& intervention, const PosteriorDraws& draws,
                                          const FixedConstants& c, std::uint64_t seed, std::size_t n_mc = 0);

enum class CensorKind { Exact, IntervalCensored, RightCensored };

/// Failure status of an observed trajectory; `lo` and `hi` bound the failure
/// time. Exact (lo == hi) is for callers holding a known failure time;
/// censor_classify never returns it.
struct CensorResult {
  CensorKind kind = CensorKind::RightCensored;
  double lo = 0.0;
  double hi = 0.0;  ///< infinity when right censored
};

/// First interval (w_{t-1}, w_t] with y_t >= factor * y0; ties count as failed.
/// Throws DataError when y0 or every later measurement is missing.
CensorResult censor_classify(const DeviceRecord& record, const FixedConstants& c = {});

}  // namespace relscm
