#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relscm/datagen.hpp"
#include "relscm/posterior.hpp"
#include "relscm/sampler.hpp"

// File formats. Numbers in CSV files are written with six decimals so that
// write -> read -> write reproduces the same bytes. JSON readers reject
// unknown keys with ConfigError; CSV readers report the offending line in a
// DataError.

namespace relscm::io {

/// Fixed six-decimal rendering used by every CSV writer.
std::string format6(double x);

inline constexpr std::string_view kDatasetHeader = "id,regime,x_S,x_T,x_P,x_H,w0,w1,w2,w3,y0,y1,y2,y3";

void write_dataset_csv(std::ostream& out, std::span<const DeviceRecord> records);
std::vector<DeviceRecord> read_dataset_csv(std::istream& in);
void save_dataset(const std::filesystem::path& path, std::span<const DeviceRecord> records);
std::vector<DeviceRecord> load_dataset(const std::filesystem::path& path);

/// ModelParams as a JSON object keyed by field name. Missing effect vectors
/// read as zeros and missing tables as uniform; the result is validated.
std::string params_to_json(const ModelParams& theta);
ModelParams params_from_json(std::string_view text);

/// {"regime", "design": {"type": "full_factorial", "replicates"} | {"type": "observational", "n"},
///  "seed", "jitter_times", "constants", "truth" | "truth_file"}. A relative
/// truth_file is resolved against `base_dir`.
GeneratorSpec generator_spec_from_json(std::string_view text, const std::filesystem::path& base_dir = {});
std::string generator_spec_to_json(const GeneratorSpec& spec);

struct FitConfig {
  FitSpec spec;
  SamplerConfig sampler;
  std::optional<std::string> dataset;  ///< path, relative to the config file
  bool allow_unconverged = false;
};

/// {"regime", "dataset", "cardinalities", "constants", "priors", "cubic_active",
///  "probabilities_active", "sampler": {...}, "allow_unconverged"}. Block
/// switches default to FitSpec::for_regime.
FitConfig fit_config_from_json(std::string_view text);

/// Everything a draws file carries: the draws plus the model they belong to.
struct DrawsBundle {
  PosteriorDraws draws;
  FitSpec spec;
  std::optional<Diagnostics> diagnostics;
  std::string dataset;  ///< provenance only
};

/// Columns: chain, iteration (both 1-based), then one column per name.
void write_draws_csv(std::ostream& out, const PosteriorDraws& draws);
PosteriorDraws read_draws_csv(std::istream& in);

std::string draws_sidecar_json(const DrawsBundle& bundle);
/// Fills everything but the draw values from a sidecar.
DrawsBundle draws_sidecar_from_json(std::string_view text);

/// Writes `path` and `path`.json.
void save_draws(const std::filesystem::path& path, const DrawsBundle& bundle);
/// Reads both files and checks that they agree.
DrawsBundle load_draws(const std::filesystem::path& path);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace relscm::io
