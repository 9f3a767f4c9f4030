#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergmpool/network.hpp"
#include "ergmpool/terms.hpp"

namespace ergmpool {

struct MetropolisOptions {
  // Defaults: burn-in 10 n^2 and thinning n^2 proposals.
  std::optional<std::size_t> burn_in;
  std::optional<std::size_t> thinning;
  std::size_t sample_count = 1;
};

struct SimConfig {
  std::size_t n = 0;
  ModelSpec model;
  Eigen::VectorXd theta;
  std::uint64_t seed = 1;
  std::optional<std::size_t> outdegree_cap;
  MetropolisOptions metropolis;
};

// Draws every dyad independently from its four-state distribution.
DirectedNetwork sample_exact(const SimConfig& config, const AttributeTable& attrs);

// Single-tie-toggle Metropolis chain started from the empty graph. With an
// out-degree cap, proposals that would exceed it are rejected, so the chain
// targets the ERGM conditioned on the cap.
std::vector<DirectedNetwork> sample_metropolis(const SimConfig& config, const AttributeTable& attrs);

struct AttributeGenSpec {
  double female_probability = 0.5;
  double skills_mean = 0.45;
  double skills_sd = 0.1;
  double perceived_mean = 0.46;
  double perceived_sd = 0.15;
};

// Synthetic covariates: Bernoulli gender and truncated-normal skills on
// [0,1]. Skill items are left missing.
AttributeTable generate_attributes(std::size_t n, std::uint64_t seed,
                                   const AttributeGenSpec& spec = {});

struct GofRecord {
  std::string term;
  double observed = 0.0;
  double simulated_mean = 0.0;
  double simulated_sd = 0.0;
  // Mid-rank quantile of the observed statistic among the replicates.
  double quantile = 0.0;
  double lower_1 = 0.0;   // simulated 1% quantile
  double upper_99 = 0.0;  // simulated 99% quantile
};

std::vector<GofRecord> gof(const DirectedNetwork& network, const AttributeTable& attrs,
                           const ModelSpec& model, const Eigen::VectorXd& theta,
                           std::uint64_t seed, std::size_t replicates = 1000);

}  // namespace ergmpool
