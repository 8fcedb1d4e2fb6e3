#pragma once

#include <span>

#include "relscm/posterior.hpp"
#include "relscm/sampler.hpp"

namespace relscm {

struct FitResult {
  FitSpec spec;
  PosteriorDraws draws;  ///< constrained, columns named by param_names()
  Diagnostics diagnostics;
};

/// Samples the posterior of `spec` given `data` and maps every draw back to
/// ModelParams (rounded by quantize6). Throws DataError when a record belongs
/// to another regime or the dataset is empty.
FitResult fit(std::span<const DeviceRecord> data, const FitSpec& spec, const SamplerConfig& cfg);

/// ModelParams of every row of a constrained draws table, in row order.
std::vector<ModelParams> draw_params(const PosteriorDraws& draws);

}  // namespace relscm
