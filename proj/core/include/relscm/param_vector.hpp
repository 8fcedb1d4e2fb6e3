#pragma once

#include <span>
#include <string>
#include <vector>

#include "relscm/types.hpp"

namespace relscm {

/// Column names of a flattened ModelParams, e.g. "delta1_S[2]" or "pi_S[1][3]".
/// Levels are 1-based; pi_S / pi_T are indexed [humidity level, factor level].
std::vector<std::string> param_names(const Cardinalities& card);

std::vector<double> flatten(const ModelParams& theta);

/// Inverse of flatten. Throws ConfigError when the length does not match `card`.
ModelParams unflatten(std::span<const double> values, const Cardinalities& card);

/// Inverse of param_names: counts the alpha_S, alpha_T and alpha_P columns.
/// Throws ConfigError unless `names` equals param_names of the result.
Cardinalities cardinalities_from_names(std::span<const std::string> names);

/// Rounds every entry to 6 decimals while keeping each sum-to-zero vector and
/// each probability row exact in decimal: the last entry of a block is
/// recomputed from the rounded others.
void quantize6(ModelParams& theta);

}  // namespace relscm
