#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "relscm/random.hpp"
#include "relscm/types.hpp"

namespace relscm {

/// Every (x_S, x_T, x_P, x_H) cell repeated `replicates` times; the AS experiment.
struct FullFactorial {
  int replicates = 8;
};

/// `n` devices whose configuration is drawn from the humidity-dependent tables.
struct Observational {
  int n = 2048;
};

struct GeneratorSpec {
  ModelParams truth;
  FixedConstants constants;
  Regime regime = Regime::AS;
  std::variant<FullFactorial, Observational> design = FullFactorial{};
  std::uint64_t seed = 0;
  /// Beta(5,5) jitter on NS measurement times. AS times are always the nominal ones.
  bool jitter_times = true;

  void validate() const;
};

/// Maps u in [0,1] to mu_W,r + (u - 1/2) / 100, the jittered r-th measurement time (r in 1..3).
double measurement_time_from_uniform(int r, double u, const FixedConstants& c);

/// Draws u ~ Beta(5,5) and maps it through measurement_time_from_uniform.
double sample_measurement_time(int r, const FixedConstants& c, Rng& rng);

/// Index in [0, probs.size()) drawn by inverse CDF.
int sample_categorical(std::span<const double> probs, Rng& rng);

/// x_H ~ pi_H, then x_S ~ pi_S[x_H], x_T ~ pi_T[x_H], x_P ~ pi_P.
Configuration sample_config_observational(const ModelParams& theta, Rng& rng);

/// Forward-samples y0..y3 for one device. Under AS the measurement times are
/// the nominal constants; under NS they are jittered when `jitter_times` is set.
DeviceRecord generate_device(const Configuration& config, Regime regime, const ModelParams& theta,
                             const FixedConstants& c, Rng& rng, bool jitter_times = true);

/// Device j uses the stream derive_seed(spec.seed, j), so the output does not
/// depend on generation order.
std::vector<DeviceRecord> generate_dataset(const GeneratorSpec& spec);

}  // namespace relscm
