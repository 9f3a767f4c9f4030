#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergmpool/batch_io.hpp"
#include "ergmpool/fit.hpp"
#include "ergmpool/pool.hpp"
#include "ergmpool/terms.hpp"

namespace ergmpool {

// Network types in report column order.
const std::vector<std::string>& network_types();

struct InputFiles {
  std::filesystem::path edges;
  std::filesystem::path attributes;
  std::optional<std::filesystem::path> ratings;
};

enum class Estimator { Exact, Mple };

struct RunManifest {
  // (network type, files), ordered seeking before giving.
  std::vector<std::pair<std::string, InputFiles>> inputs;
  // Presets keep their preset name; custom models carry a user label.
  std::vector<ModelSpec> models;
  Estimator estimator = Estimator::Exact;
  FilterOptions filter;
  PoolConfig pool;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "ergmpool-out";
  int imputation_iterations = 10;
  std::size_t imputations = 1;
  bool write_draws = false;
};

// A preset name or {"model": "custom", "name": ..., "terms": [{"kind", "attr"}]}.
// NodeMatch is restricted to categorical covariates.
ModelSpec parse_model_entry(const nlohmann::json& entry, const std::string& where);

// Relative paths resolve against base_dir. Throws ValidationError naming the
// offending key, or UnsupportedTermError for unknown term kinds.
RunManifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunManifest load_manifest(const std::filesystem::path& file);
// Input files exist, at least one model, pool settings coherent.
void validate_manifest(const RunManifest& manifest);

struct PreparedBatch {
  std::string network_type;
  // One completed copy of the batch per imputation.
  std::vector<std::vector<NetworkData>> imputations;
  std::vector<std::string> log;  // missingness and imputation seeds
};

// Derives skills and perceived_skills, then fills missing covariates by
// chained equations pooled over the whole batch, with in- and out-degree as
// fully observed predictors.
PreparedBatch prepare_batch(const std::string& network_type, std::vector<NetworkData> batch,
                            std::size_t imputations, int iterations, std::uint64_t seed);

struct FitFailure {
  std::string network_id;
  std::string reason;
};

struct ModelFits {
  std::vector<FitResult> fits;  // network order, failures omitted
  std::vector<FitFailure> failures;
};

// Fits every network, combining imputations by Rubin's rules. Parallel over
// networks; the result does not depend on the worker count.
ModelFits fit_batch(const std::vector<std::vector<NetworkData>>& imputations, const ModelSpec& model,
                    Estimator estimator, std::size_t workers);

struct ModelResult {
  std::string network_type;
  ModelSpec model;
  ModelFits fits;
  FilteredFits filtered;  // exclusions include fit failures
  std::vector<PosteriorSummary> pooled;  // model term order
  std::uint64_t pool_seed = 0;
};

struct PipelineResult {
  std::vector<PreparedBatch> batches;
  std::vector<ModelResult> models;  // type-major, manifest model order
  // Non-convergence warnings; --strict turns them into exit status 4.
  std::vector<std::string> warnings;
  std::vector<std::string> log;
};

struct RunOptions {
  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> imputations;
};

// Filters and pools one model's fits. Throws EmptyPoolError when no network
// survives.
ModelResult pool_model(const std::string& network_type, const ModelSpec& model, ModelFits fits,
                       const FilterOptions& filter, const PoolConfig& config, std::uint64_t seed,
                       std::size_t workers);

PipelineResult run_pipeline(const RunManifest& manifest, std::size_t workers);

nlohmann::json pooled_json(const PipelineResult& result, const RunManifest& manifest);

// Writes every artifact into manifest.output_dir.
void write_outputs(const PipelineResult& result, const RunManifest& manifest);

struct RunStatus {
  int exit_code = 0;
  std::vector<std::string> warnings;
};

// Full run with the overrides applied: 0 success, 4 warnings under strict.
// Validation failures and empty pools propagate as exceptions.
RunStatus run(RunManifest manifest, const RunOptions& options, bool strict);

}  // namespace ergmpool
