#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "relscm/random.hpp"
#include "relscm/summary.hpp"

namespace relscm {

/// Log density with gradient. Must be reentrant: chains call it concurrently.
/// Returns -infinity at points outside the support.
using LogDensity = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Draws an initial point for one chain.
using InitFn = std::function<Eigen::VectorXd(Rng&)>;

struct SamplerConfig {
  int chains = 4;
  int warmup = 1000;
  int draws = 5000;  ///< retained per chain
  std::uint64_t seed = 20240501;
  std::string algorithm = "nuts";
  double target_accept = 0.8;
  int max_tree_depth = 10;

  /// Throws ConfigError. `for_diagnostics` additionally requires at least two chains.
  void validate(bool for_diagnostics = true) const;
};

/// Adaptation outcome of one chain.
struct ChainInfo {
  double step_size = 0.0;
  std::vector<double> inv_metric;
  int divergences = 0;  ///< after warmup
  double mean_accept = 0.0;
  double mean_tree_depth = 0.0;
  long leapfrog_steps = 0;
};

/// G = chains x draws_per_chain rows of named values. Rows of chain c occupy
/// [c * draws_per_chain, (c + 1) * draws_per_chain).
struct PosteriorDraws {
  std::vector<std::string> names;
  int chains = 0;
  int draws_per_chain = 0;
  std::vector<double> values;  ///< row-major, size() == rows() * dim()
  std::uint64_t seed = 0;
  SamplerConfig config;
  std::vector<ChainInfo> chain_info;

  int dim() const { return static_cast<int>(names.size()); }
  int rows() const { return chains * draws_per_chain; }
  std::span<const double> row(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * names.size(), names.size()};
  }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * names.size() + j]; }
  int chain_of(int i) const { return i / draws_per_chain; }
  int column_index(const std::string& name) const;
  std::vector<double> column(int j) const;
  std::vector<double> column(const std::string& name) const { return column(column_index(name)); }
};

/// Every proposal of a whole warmup window was rejected.
class AdaptationError : public std::runtime_error {
 public:
  AdaptationError(const std::string& what, int chain, int window_begin, int window_end, double step_size)
      : std::runtime_error(what),
        chain(chain),
        window_begin(window_begin),
        window_end(window_end),
        step_size(step_size) {}
  int chain;
  int window_begin;
  int window_end;
  double step_size;
};

/// Multi-chain NUTS with dual-averaging step size and windowed diagonal
/// metric adaptation during warmup. Chains run on separate threads with
/// generators derived from cfg.seed, so results are deterministic.
PosteriorDraws run_sampler(const LogDensity& target, const InitFn& init, std::vector<std::string> names,
                           const SamplerConfig& cfg);

struct ParamDiagnostic {
  std::string name;
  std::optional<double> rhat;  ///< empty when degenerate
  std::optional<double> ess;
  bool degenerate = false;
};

struct Diagnostics {
  std::vector<ParamDiagnostic> params;
  double max_rhat = 1.0;
  double min_ess = 0.0;
  bool converged = false;
};

inline constexpr double kRhatThreshold = 1.01;
inline constexpr double kEssThreshold = 400.0;

/// Split R-hat of equal-length chains. Empty when every value is identical.
std::optional<double> split_rhat(const std::vector<std::vector<double>>& chains);

/// Multi-chain effective sample size on split chains (Geyer initial monotone
/// sequence). Empty when every value is identical.
std::optional<double> effective_sample_size(const std::vector<std::vector<double>>& chains);

/// Converged iff max R-hat <= 1.01 and min ESS >= 400 over non-degenerate
/// parameters. Throws DomainError with fewer than two chains.
Diagnostics diagnose(const PosteriorDraws& draws);

struct NamedSummary {
  std::string name;
  Summary summary;
};

/// Mean, sd and HDI for every column. Requires at least 100 rows.
std::vector<NamedSummary> summarize(const PosteriorDraws& draws, double level = 0.95);

}  // namespace relscm
