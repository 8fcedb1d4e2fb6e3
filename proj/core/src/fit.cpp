#include "relscm/fit.hpp"

#include "relscm/errors.hpp"
#include "relscm/param_vector.hpp"

namespace relscm {

FitResult fit(std::span<const DeviceRecord> data, const FitSpec& spec, const SamplerConfig& cfg) {
  spec.validate();
  cfg.validate(cfg.chains >= 2);
  if (data.empty()) throw DataError("cannot fit an empty dataset");
  for (const auto& r : data) {
    if (r.regime != spec.regime) {
      throw DataError("device " + r.id + " is " + std::string(to_string(r.regime)) + " but the fit is " +
                      std::string(to_string(spec.regime)));
    }
    r.validate();
    validate(r.config, spec.card);
  }

  const LogPosterior target(data, spec);
  const ParamLayout& layout = target.layout();
  const LogDensity density = [&target](const Eigen::VectorXd& v, Eigen::VectorXd& grad) { return target(v, grad); };
  const InitFn init = [&target](Rng& rng) { return target.initial_point(rng); };
  const PosteriorDraws raw = run_sampler(density, init, layout.names(), cfg);

  FitResult out;
  out.spec = spec;
  out.draws.names = param_names(spec.card);
  out.draws.chains = raw.chains;
  out.draws.draws_per_chain = raw.draws_per_chain;
  out.draws.seed = raw.seed;
  out.draws.config = raw.config;
  out.draws.chain_info = raw.chain_info;
  out.draws.values.reserve(static_cast<std::size_t>(raw.rows()) * out.draws.names.size());
  for (int i = 0; i < raw.rows(); ++i) {
    const auto row = raw.row(i);
    const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
    ModelParams theta = layout.constrain(v);
    quantize6(theta);
    const auto flat = flatten(theta);
    out.draws.values.insert(out.draws.values.end(), flat.begin(), flat.end());
  }
  if (out.draws.chains >= 2) out.diagnostics = diagnose(out.draws);
  return out;
}

std::vector<ModelParams> draw_params(const PosteriorDraws& draws) {
  const Cardinalities card = cardinalities_from_names(draws.names);
  std::vector<ModelParams> out;
  out.reserve(static_cast<std::size_t>(draws.rows()));
  for (int i = 0; i < draws.rows(); ++i) out.push_back(unflatten(draws.row(i), card));
  return out;
}

}  // namespace relscm
