#include "relscm/datagen.hpp"

#include <string>

#include "relscm/errors.hpp"
#include "relscm/structural.hpp"

namespace relscm {

void GeneratorSpec::validate() const {
  truth.validate();
  constants.validate();
  if (const auto* ff = std::get_if<FullFactorial>(&design)) {
    if (ff->replicates < 1) throw ConfigError("replicates must be at least 1");
  } else if (std::get<Observational>(design).n < 1) {
    throw ConfigError("n must be at least 1");
  }
}

double measurement_time_from_uniform(int r, double u, const FixedConstants& c) {
  if (r < 1 || r > 3) throw DomainError("measurement index must be 1, 2 or 3");
  return c.nominal_times[r - 1] + (u - 0.5) / 100.0;
}

double sample_measurement_time(int r, const FixedConstants& c, Rng& rng) {
  return measurement_time_from_uniform(r, sample_beta(5.0, 5.0, rng), c);
}

int sample_categorical(std::span<const double> probs, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double cum = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  // u fell in the rounding gap above the accumulated mass
  return last_positive;
}

Configuration sample_config_observational(const ModelParams& theta, Rng& rng) {
  Configuration config;
  const int h = sample_categorical(theta.pi_H, rng);
  config.x_H = humidity_class(h + 1);
  config.x_S = sample_categorical(theta.pi_S[h], rng) + 1;
  config.x_T = sample_categorical(theta.pi_T[h], rng) + 1;
  config.x_P = sample_categorical(theta.pi_P, rng) + 1;
  return config;
}

DeviceRecord generate_device(const Configuration& config, Regime regime, const ModelParams& theta,
                             const FixedConstants& c, Rng& rng, bool jitter_times) {
  validate(config, theta.cardinalities());
  std::normal_distribution<double> std_normal(0.0, 1.0);
  DeviceRecord rec;
  rec.config = config;
  rec.regime = regime;
  rec.times[0] = 0.0;
  const double y0 = mean_y0(config, theta) + theta.sigma0 * std_normal(rng);
  rec.resistances[0] = y0;
  for (int t = 1; t <= 3; ++t) {
    const double w = (regime == Regime::NS && jitter_times) ? sample_measurement_time(t, c, rng)
                                                            : c.nominal_times[t - 1];
    rec.times[t] = w;
    rec.resistances[t] = mean_yt(y0, config, w, regime, theta, c) + theta.sigmaY * std_normal(rng);
  }
  return rec;
}

std::vector<DeviceRecord> generate_dataset(const GeneratorSpec& spec) {
  spec.validate();
  const Cardinalities card = spec.truth.cardinalities();
  std::vector<DeviceRecord> out;
  std::uint64_t j = 0;
  auto emit = [&](const Configuration& config, Rng& rng) {
    DeviceRecord rec = generate_device(config, spec.regime, spec.truth, spec.constants, rng,
                                       spec.jitter_times);
    rec.id = std::to_string(j + 1);
    out.push_back(std::move(rec));
  };
  if (const auto* ff = std::get_if<FullFactorial>(&spec.design)) {
    out.reserve(static_cast<std::size_t>(card.cells()) * ff->replicates);
    for (int s = 1; s <= card.n_S; ++s)
      for (int t = 1; t <= card.n_T; ++t)
        for (int p = 1; p <= card.n_P; ++p)
          for (int h = 1; h <= Cardinalities::n_H; ++h)
            for (int r = 0; r < ff->replicates; ++r, ++j) {
              Rng rng = make_rng(spec.seed, j);
              emit(Configuration{s, t, p, humidity_class(h)}, rng);
            }
  } else {
    const int n = std::get<Observational>(spec.design).n;
    out.reserve(n);
    for (; j < static_cast<std::uint64_t>(n); ++j) {
      Rng rng = make_rng(spec.seed, j);
      const Configuration config = sample_config_observational(spec.truth, rng);
      emit(config, rng);
    }
  }
  return out;
}

}  // namespace relscm
