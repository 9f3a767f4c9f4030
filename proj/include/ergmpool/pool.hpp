#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergmpool/diagnostics.hpp"
#include "ergmpool/effect.hpp"

namespace ergmpool {

struct PoolConfig {
  std::size_t chains = 4;
  // Total iterations per chain, warmup included.
  std::size_t iterations = 5000;
  std::size_t warmup = 2500;
  std::uint64_t seed = 1;
  double tau_scale = 1.0;          // half-Cauchy scale of tau
  double tau_country_scale = 1.0;  // half-Cauchy scale of tau_country
  double mu_sd = 1.0;              // sd of mu_c around alpha_c
  // Clamps used for reductions and tests; unset means sampled.
  std::optional<double> fixed_tau;
  std::optional<double> fixed_alpha;
  std::size_t workers = 1;
  bool keep_draws = false;
  double rhat_warning = 1.05;
};

struct IntervalSummary {
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
  double lower = 0.0;  // 2.5% sample quantile
  double upper = 0.0;  // 97.5% sample quantile
};

struct CountryEffect {
  std::string country;
  std::size_t observations = 0;
  IntervalSummary mu;
  IntervalSummary alpha;
};

struct NetworkEffect {
  std::string network_id;
  std::string country;
  double estimate = 0.0;
  double std_error = 0.0;
  IntervalSummary theta;
};

struct ParameterDiagnostics {
  std::string parameter;
  ChainDiagnostics diagnostics;
};

// Post-warmup draws, values[parameter][chain][iteration].
struct PosteriorDraws {
  std::vector<std::string> parameters;
  std::vector<std::vector<std::vector<double>>> values;

  const std::vector<std::vector<double>>& of(const std::string& parameter) const;
};

struct PosteriorSummary {
  std::string term;
  std::size_t n_observations = 0;
  // Headline pooled effect: per-draw precision-weighted mean of the mu_c.
  // Its mean is the Rao-Blackwellised estimate (average over draws of the
  // conditional mean given tau and tau_country); sd and quantiles come from the
  // draws.
  IntervalSummary pooled;
  IntervalSummary tau;
  IntervalSummary tau_country;
  std::vector<CountryEffect> countries;
  std::vector<NetworkEffect> networks;
  std::vector<ParameterDiagnostics> diagnostics;
  std::vector<std::string> warnings;
  double max_rhat = 1.0;
  double min_ess = 0.0;
  // Filled only with PoolConfig::keep_draws.
  PosteriorDraws draws;
};

// Hierarchical random-effects pooling of one term:
//   estimate_k ~ N(theta_k, se_k^2)      theta_k ~ N(mu_c(k), tau^2)
//   mu_c ~ N(alpha_c, mu_sd^2)           alpha_c ~ N(0, tau_country^2)
//   tau ~ HalfCauchy(0, tau_scale)       tau_country ~ HalfCauchy(0, tau_country_scale)
// Blocked Gibbs: log tau and log tau_country are slice sampled from the
// marginal likelihood of the estimates (theta, mu and alpha integrated out),
// then mu, alpha and theta are drawn from their exact normal conditionals. Observations are sorted canonically first, so
// input order never affects the output.
PosteriorSummary pool(std::vector<EffectObservation> observations, const PoolConfig& config);

// Inverse-variance weighted mean and its standard error.
std::pair<double, double> fixed_effect_reference(const std::vector<EffectObservation>& observations);

IntervalSummary summarise_draws(std::vector<double> values);

}  // namespace ergmpool
