#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "relscm/random.hpp"
#include "relscm/types.hpp"

namespace relscm {

/// Prior hyperparameters. Empty lambda vectors mean all-ones Dirichlet.
struct PriorHyper {
  double df = 3.0;
  double effect_scale = 25.0;   ///< alpha and delta free coordinates
  double beta_scale = 50.0;     ///< beta1, beta2
  double mu0_location = 1000.0;
  double mu0_scale = 1000.0;
  double sigma_scale = 2.5;     ///< half-Student on sigma0, sigmaY
  std::vector<double> lambda_H;
  std::vector<double> lambda_P;
  std::vector<std::vector<double>> lambda_S;
  std::vector<std::vector<double>> lambda_T;
};

/// What is being fitted: regime, factor cardinalities, fixed constants, priors
/// and which parameter blocks are free. Inactive blocks are held at zero
/// (cubic block) or uniform (probability tables) and contribute no prior term.
struct FitSpec {
  Regime regime = Regime::AS;
  Cardinalities card;
  FixedConstants constants;
  PriorHyper priors;
  bool cubic_active = true;
  bool probabilities_active = false;

  /// Defaults for a regime: AS frees the cubic block and fixes the tables;
  /// NS frees the tables and fixes the cubic block, which the NS likelihood
  /// does not involve.
  static FitSpec for_regime(Regime regime, const Cardinalities& card = {},
                            const FixedConstants& constants = {});

  /// Throws ConfigError when the active blocks contradict the regime or a
  /// hyperparameter is invalid.
  void validate() const;

  std::vector<double> lambda_H() const;
  std::vector<double> lambda_P() const;
  std::vector<double> lambda_S(int h) const;
  std::vector<double> lambda_T(int h) const;
};

/// Term-by-term log-likelihood: Gaussian y0 and y_t terms for every device plus,
/// under NS, the categorical terms of x_H, x_P and of x_S, x_T given x_H.
/// Throws DataError on records from another regime, DomainError on a
/// nonpositive scale, NonFiniteError when the sum is not finite.
double log_likelihood(const ModelParams& theta, std::span<const DeviceRecord> data, Regime regime,
                      const FixedConstants& c);

/// Sum of the independent prior terms of the active blocks. Student priors on
/// sum-to-zero vectors apply to the free coordinates (all entries but the last).
double log_prior(const ModelParams& theta, const FitSpec& spec);

/// Maps between the unconstrained sampling space and ModelParams.
/// Layout: mu0, alpha free coordinates, beta1, delta1 free coordinates,
/// [beta2, delta2 free coordinates], log sigma0, log sigmaY, [stick-breaking
/// coordinates of pi_H, pi_P, pi_S rows, pi_T rows].
class ParamLayout {
 public:
  enum class Kind { Real, SumToZero, LogPositive, Simplex };

  struct Segment {
    Kind kind;
    std::string name;
    int offset;
    int length;  ///< unconstrained length
    double ModelParams::*scalar = nullptr;
    std::vector<double> ModelParams::*vec = nullptr;
    std::vector<std::vector<double>> ModelParams::*table = nullptr;
    int row = 0;
    double prior_location = 0.0;
    double prior_scale = 1.0;
  };

  explicit ParamLayout(const FitSpec& spec);

  int dim() const { return dim_; }
  const std::vector<Segment>& segments() const { return segments_; }
  /// Unconstrained coordinate names, e.g. "alpha_S.free[2]", "log_sigmaY", "pi_S[2].stick[1]".
  const std::vector<std::string>& names() const { return names_; }
  int index_of(std::string_view name) const;

  ModelParams constrain(const Eigen::VectorXd& v, double* log_jacobian = nullptr) const;
  Eigen::VectorXd unconstrain(const ModelParams& theta) const;

  /// Adds d(f + log_jacobian)/dv to `grad`, given df/dtheta in `dtheta` (same
  /// shape as ModelParams) and the point `v`.
  void backprop(const Eigen::VectorXd& v, const ModelParams& dtheta, Eigen::VectorXd& grad) const;

  const FitSpec& spec() const { return spec_; }

 private:
  FitSpec spec_;
  std::vector<Segment> segments_;
  std::vector<std::string> names_;
  int dim_ = 0;
};

/// Per-cell sufficient statistics of a dataset. Evaluating the likelihood
/// from them costs O(cells) instead of O(devices).
class SufficientStats {
 public:
  SufficientStats(std::span<const DeviceRecord> data, Regime regime, const FixedConstants& c,
                  const Cardinalities& card);

  /// Log-likelihood and, if `dtheta` is non-null, its gradient with respect to
  /// every ModelParams entry (written into `dtheta`, which must be shaped by
  /// ModelParams::zeros). `include_categorical` adds the NS configuration terms.
  double log_likelihood(const ModelParams& theta, bool include_categorical,
                        ModelParams* dtheta) const;

  int devices() const { return devices_; }
  double mean_y0() const { return mean_y0_; }

 private:
  struct Cell {
    double n0 = 0, y0_mean = 0, y0_ss = 0;
    double nt = 0, dd = 0, td = 0, cd = 0, tt = 0, tc = 0, cc = 0;
  };
  Cardinalities card_;
  std::vector<Cell> cells_;
  std::vector<double> count_H_, count_P_;
  std::vector<std::vector<double>> count_S_, count_T_;
  int devices_ = 0;
  double mean_y0_ = 0.0;
};

/// Unnormalized log posterior over the unconstrained vector: log prior +
/// log likelihood + log Jacobian. Returns -infinity (never throws) at points
/// whose constrained image or density is not finite. Reentrant.
class LogPosterior {
 public:
  LogPosterior(std::span<const DeviceRecord> data, FitSpec spec);

  int dim() const { return layout_.dim(); }
  const ParamLayout& layout() const { return layout_; }
  const FitSpec& spec() const { return layout_.spec(); }

  double operator()(const Eigen::VectorXd& v) const;
  double operator()(const Eigen::VectorXd& v, Eigen::VectorXd& grad) const;

  /// Fast likelihood from sufficient statistics (same value as relscm::log_likelihood).
  double log_likelihood(const ModelParams& theta) const;

  /// Uniform in [-2, 2] on every coordinate except mu0, which starts at the
  /// sample mean of y0.
  Eigen::VectorXd initial_point(Rng& rng) const;

 private:
  double evaluate(const Eigen::VectorXd& v, Eigen::VectorXd* grad) const;

  ParamLayout layout_;
  SufficientStats stats_;
};

/// log_prior plus its gradient with respect to ModelParams entries (free
/// coordinates only for sum-to-zero vectors). `dtheta` is accumulated into.
double log_prior_with_gradient(const ModelParams& theta, const FitSpec& spec, ModelParams* dtheta);

}  // namespace relscm
