#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergmpool/batch_io.hpp"
#include "ergmpool/pool.hpp"
#include "ergmpool/sim.hpp"
#include "ergmpool/terms.hpp"

namespace ergmpool {

struct SyntheticBatchConfig {
  std::size_t networks = 10;
  std::size_t nodes = 20;
  ModelSpec model;
  Eigen::VectorXd theta;
  std::uint64_t seed = 1;
  // Assigned round-robin over networks.
  std::vector<std::string> countries{"DE", "IT", "PT"};
  // Setting a cap switches to the Metropolis sampler.
  std::optional<std::size_t> outdegree_cap;
  MetropolisOptions metropolis;
  AttributeGenSpec attributes;
};

// Networks net001.. with synthetic covariates (skills and perceived_skills
// already derived) and ties drawn from the model.
std::vector<NetworkData> simulate_batch(const SyntheticBatchConfig& config);

// Schema: {"networks", "nodes", "model" (preset name or custom object),
// "theta", "seed", "countries", "outdegree_cap", "burn_in", "thinning"}.
SyntheticBatchConfig parse_sim_config(const nlohmann::json& doc);

// Generating values on the scale of published classroom estimates.
Eigen::VectorXd default_theta(const std::string& preset);

struct RecoveryOptions {
  std::string preset = "h2";
  std::size_t networks = 100;
  std::size_t nodes = 20;
  std::optional<Eigen::VectorXd> theta;  // default_theta(preset) when unset
  std::uint64_t seed = 1;
  std::size_t replications = 1;
  PoolConfig pool;
  std::size_t workers = 1;
};

struct RecoveryTerm {
  std::string term;
  double theta_true = 0.0;
  double mean_estimate = 0.0;  // average pooled mean over replications
  double bias = 0.0;
  double rmse = 0.0;
  double coverage = 0.0;  // share of 95% intervals covering theta_true
  double mean_lower = 0.0;
  double mean_upper = 0.0;
};

struct RecoveryReport {
  std::string preset;
  std::size_t networks = 0;
  std::size_t nodes = 0;
  std::size_t replications = 0;
  std::size_t excluded = 0;  // summed over replications
  std::vector<RecoveryTerm> terms;
  std::vector<std::string> warnings;
};

// Simulates batches at theta, fits, filters and pools them with the run
// pipeline stages, and scores the pooled means against theta.
RecoveryReport recovery_study(const RecoveryOptions& options);

std::string format_recovery(const RecoveryReport& report);

}  // namespace ergmpool
