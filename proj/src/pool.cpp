#include "ergmpool/pool.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdio>
#include <limits>
#include <numeric>
#include <tuple>

#include "ergmpool/error.hpp"
#include "ergmpool/parallel.hpp"
#include "ergmpool/rng.hpp"
#include "ergmpool/slice.hpp"

namespace ergmpool {
namespace {

struct Data {
  std::vector<double> y;         // estimates
  std::vector<double> v;         // squared standard errors
  std::vector<std::size_t> c;    // country index per observation
  std::vector<std::string> countries;
  std::vector<std::vector<std::size_t>> members;
};

double log_half_cauchy(double x, double scale) { return -std::log1p((x / scale) * (x / scale)); }

// Parameter layout within one draw vector.
struct Layout {
  std::size_t countries, networks;
  std::size_t pooled() const { return 0; }
  std::size_t tau() const { return 1; }
  std::size_t tau_country() const { return 2; }
  std::size_t mu(std::size_t c) const { return 3 + c; }
  std::size_t alpha(std::size_t c) const { return 3 + countries + c; }
  std::size_t theta(std::size_t k) const { return 3 + 2 * countries + k; }
  std::size_t size() const { return 3 + 2 * countries + networks; }
  // Extra row after the parameters: E[pooled | tau, tau_country] per draw.
  std::size_t conditional_pooled() const { return size(); }
};

// One chain's post-warmup draws, [parameter][iteration].
std::vector<std::vector<double>> run_chain(const Data& d, const PoolConfig& cfg, const Layout& lay,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t K = d.y.size(), C = d.countries.size();
  const double s2 = cfg.mu_sd * cfg.mu_sd;

  const double ybar = std::accumulate(d.y.begin(), d.y.end(), 0.0) / static_cast<double>(K);
  double ysd = 0.0;
  for (double y : d.y) ysd += (y - ybar) * (y - ybar);
  ysd = K > 1 ? std::sqrt(ysd / static_cast<double>(K - 1)) : 0.0;
  const double spread = std::max(ysd, 1.0);

  // Overdispersed start.
  double tau = cfg.fixed_tau.value_or(std::max(ysd, 0.1) * std::exp(normal(rng)));
  double tau_c = std::exp(normal(rng));
  std::vector<double> mu(C), alpha(C), theta(K);
  for (std::size_t c = 0; c < C; ++c) {
    mu[c] = ybar + 2.0 * spread * normal(rng);
    alpha[c] = cfg.fixed_alpha.value_or(ybar + 2.0 * spread * normal(rng));
  }

  std::vector<std::vector<double>> out(lay.size() + 1);
  std::vector<double> mu_mean(C);
  const std::size_t keep = cfg.iterations - cfg.warmup;
  for (auto& v : out) v.reserve(keep);

  // Per country, with theta, mu and alpha integrated out,
  //   y_c ~ N(m 1, diag(v_k + tau^2) + b 1 1'),
  // where m = 0 and b = tau_country^2 + mu_sd^2, or m = alpha_c and b = mu_sd^2
  // when alpha is clamped.
  const double alpha0 = cfg.fixed_alpha.value_or(0.0);
  auto marginal_log_lik = [&](double t2, double b) {
    double lp = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      double w_sum = 0.0, wr_sum = 0.0, wrr = 0.0, logdet = 0.0;
      for (auto k : d.members[c]) {
        const double var = d.v[k] + t2;
        const double r = d.y[k] - alpha0;
        w_sum += 1.0 / var;
        wr_sum += r / var;
        wrr += r * r / var;
        logdet += std::log(var);
      }
      logdet += std::log1p(b * w_sum);
      lp -= 0.5 * (logdet + wrr - wr_sum * wr_sum / (1.0 / b + w_sum));
    }
    return lp;
  };
  auto layer_variance = [&](double tc) { return cfg.fixed_alpha ? s2 : s2 + tc * tc; };

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    // tau | tau_country, y.
    if (!cfg.fixed_tau) {
      const double b = layer_variance(tau_c);
      auto log_density = [&](double u) {
        return marginal_log_lik(std::exp(2.0 * u), b) + log_half_cauchy(std::exp(u), cfg.tau_scale) + u;
      };
      tau = std::exp(slice_sample(std::log(tau), log_density, rng));
    }
    const double t2 = tau * tau;

    // tau_country | tau, y; with alpha clamped it only sees the clamped values.
    if (cfg.fixed_alpha) {
      auto log_density = [&](double u) {
        const double t2c = std::exp(2.0 * u);
        double lp = 0.0;
        for (double a : alpha) lp -= 0.5 * (std::log(t2c) + a * a / t2c);
        return lp + log_half_cauchy(std::exp(u), cfg.tau_country_scale) + u;
      };
      tau_c = std::exp(slice_sample(std::log(tau_c), log_density, rng));
    } else {
      auto log_density = [&](double u) {
        return marginal_log_lik(t2, s2 + std::exp(2.0 * u)) +
               log_half_cauchy(std::exp(u), cfg.tau_country_scale) + u;
      };
      tau_c = std::exp(slice_sample(std::log(tau_c), log_density, rng));
    }

    // mu_c | tau, tau_country, y.
    const double b = layer_variance(tau_c);
    for (std::size_t c = 0; c < C; ++c) {
      double prec = 1.0 / b, num = alpha0 / b;
      for (auto k : d.members[c]) {
        prec += 1.0 / (d.v[k] + t2);
        num += d.y[k] / (d.v[k] + t2);
      }
      mu_mean[c] = num / prec;
      mu[c] = mu_mean[c] + normal(rng) / std::sqrt(prec);
    }

    // alpha_c | mu_c, tau_country.
    if (!cfg.fixed_alpha) {
      const double prec = 1.0 / s2 + 1.0 / (tau_c * tau_c);
      for (std::size_t c = 0; c < C; ++c)
        alpha[c] = (mu[c] / s2) / prec + normal(rng) / std::sqrt(prec);
    }

    // theta_k | mu, tau.
    for (std::size_t k = 0; k < K; ++k) {
      if (tau == 0.0) {
        theta[k] = mu[d.c[k]];
        continue;
      }
      const double prec = 1.0 / d.v[k] + 1.0 / t2;
      const double mean = (d.y[k] / d.v[k] + mu[d.c[k]] / t2) / prec;
      theta[k] = mean + normal(rng) / std::sqrt(prec);
    }

    if (it < cfg.warmup) continue;
    double wsum = 0.0, wmu = 0.0, wmean = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
      double w = 0.0;
      for (auto k : d.members[c]) w += 1.0 / (d.v[k] + t2);
      wsum += w;
      wmu += w * mu[c];
      wmean += w * mu_mean[c];
    }
    out[lay.pooled()].push_back(wmu / wsum);
    out[lay.conditional_pooled()].push_back(wmean / wsum);
    out[lay.tau()].push_back(tau);
    out[lay.tau_country()].push_back(tau_c);
    for (std::size_t c = 0; c < C; ++c) {
      out[lay.mu(c)].push_back(mu[c]);
      out[lay.alpha(c)].push_back(alpha[c]);
    }
    for (std::size_t k = 0; k < K; ++k) out[lay.theta(k)].push_back(theta[k]);
  }
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

const std::vector<std::vector<double>>& PosteriorDraws::of(const std::string& parameter) const {
  auto it = std::find(parameters.begin(), parameters.end(), parameter);
  if (it == parameters.end()) throw ValidationError("no draws for parameter '" + parameter + "'");
  return values[static_cast<std::size_t>(it - parameters.begin())];
}

IntervalSummary summarise_draws(std::vector<double> values) {
  IntervalSummary s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : values) ss += (x - s.mean) * (x - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.median = quantile_sorted(values, 0.5);
  s.lower = quantile_sorted(values, 0.025);
  s.upper = quantile_sorted(values, 0.975);
  return s;
}

std::pair<double, double> fixed_effect_reference(const std::vector<EffectObservation>& observations) {
  if (observations.empty()) throw ValidationError("fixed-effect reference needs an observation");
  double wsum = 0.0, wy = 0.0;
  for (const auto& o : observations) {
    if (!(o.std_error > 0.0) || !std::isfinite(o.std_error))
      throw ValidationError("invalid standard error for network " + o.network_id);
    const double w = 1.0 / (o.std_error * o.std_error);
    wsum += w;
    wy += w * o.estimate;
  }
  return {wy / wsum, 1.0 / std::sqrt(wsum)};
}

PosteriorSummary pool(std::vector<EffectObservation> observations, const PoolConfig& config) {
  if (observations.empty()) throw EmptyPoolError("pool requires at least one observation");
  if (config.chains < 2) throw ValidationError("pool requires at least two chains");
  if (config.warmup >= config.iterations) throw ValidationError("warmup must be below iterations");
  if (config.iterations - config.warmup < 4)
    throw ValidationError("pool requires at least four post-warmup draws");
  if (!(config.tau_scale > 0.0) || !(config.tau_country_scale > 0.0) || !(config.mu_sd > 0.0))
    throw ValidationError("prior scales must be positive");
  if (config.fixed_tau && !(*config.fixed_tau >= 0.0))
    throw ValidationError("fixed tau must be non-negative");
  for (const auto& o : observations) {
    if (!(o.std_error > 0.0) || !std::isfinite(o.std_error))
      throw ValidationError("invalid observation for network " + o.network_id +
                            ": standard error must be positive and finite");
    if (!std::isfinite(o.estimate))
      throw ValidationError("invalid observation for network " + o.network_id + ": non-finite estimate");
  }
  std::sort(observations.begin(), observations.end(), [](const auto& a, const auto& b) {
    return std::tie(a.country, a.network_id, a.estimate, a.std_error) <
           std::tie(b.country, b.network_id, b.estimate, b.std_error);
  });

  Data d;
  std::map<std::string, std::size_t> country_index;
  for (const auto& o : observations) {
    auto [it, inserted] = country_index.emplace(o.country, d.countries.size());
    if (inserted) {
      d.countries.push_back(o.country);
      d.members.emplace_back();
    }
    d.members[it->second].push_back(d.y.size());
    d.c.push_back(it->second);
    d.y.push_back(o.estimate);
    d.v.push_back(o.std_error * o.std_error);
  }
  const Layout lay{d.countries.size(), d.y.size()};
  const std::string term = observations.front().term;

  std::vector<std::vector<std::vector<double>>> per_chain(config.chains);
  const std::uint64_t term_key = hash_string(term);
  parallel_for(config.chains, config.workers, [&](std::size_t chain) {
    per_chain[chain] = run_chain(d, config, lay, stream_seed(config.seed, {term_key, chain}));
  });

  std::vector<std::string> names(lay.size());
  names[lay.pooled()] = "mu";
  names[lay.tau()] = "tau";
  names[lay.tau_country()] = "tau_country";
  for (std::size_t c = 0; c < lay.countries; ++c) {
    names[lay.mu(c)] = "mu[" + d.countries[c] + "]";
    names[lay.alpha(c)] = "alpha[" + d.countries[c] + "]";
  }
  for (std::size_t k = 0; k < lay.networks; ++k)
    names[lay.theta(k)] = "theta[" + observations[k].network_id + "]";

  auto chains_of = [&](std::size_t param) {
    std::vector<std::vector<double>> chains;
    for (auto& ch : per_chain) chains.push_back(ch[param]);
    return chains;
  };
  auto pooled_values = [&](std::size_t param) {
    std::vector<double> all;
    for (auto& ch : per_chain) all.insert(all.end(), ch[param].begin(), ch[param].end());
    return all;
  };

  PosteriorSummary s;
  s.term = term;
  s.n_observations = observations.size();
  s.pooled = summarise_draws(pooled_values(lay.pooled()));
  // Rao-Blackwellised: averaging the conditional means removes the
  // Monte Carlo noise of the mu_c draws themselves.
  const auto conditional = pooled_values(lay.conditional_pooled());
  s.pooled.mean = std::accumulate(conditional.begin(), conditional.end(), 0.0) /
                  static_cast<double>(conditional.size());
  s.tau = summarise_draws(pooled_values(lay.tau()));
  s.tau_country = summarise_draws(pooled_values(lay.tau_country()));
  for (std::size_t c = 0; c < lay.countries; ++c)
    s.countries.push_back({d.countries[c], d.members[c].size(), summarise_draws(pooled_values(lay.mu(c))),
                           summarise_draws(pooled_values(lay.alpha(c)))});
  for (std::size_t k = 0; k < lay.networks; ++k)
    s.networks.push_back({observations[k].network_id, observations[k].country, d.y[k],
                          std::sqrt(d.v[k]), summarise_draws(pooled_values(lay.theta(k)))});

  s.max_rhat = 1.0;
  s.min_ess = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < lay.size(); ++p) {
    const bool clamped = (p == lay.tau() && config.fixed_tau) ||
                         (config.fixed_alpha && p >= lay.alpha(0) && p < lay.alpha(0) + lay.countries);
    const auto diag = diagnose(chains_of(p));
    s.diagnostics.push_back({names[p], diag});
    if (clamped || diag.degenerate) continue;
    s.max_rhat = std::max(s.max_rhat, diag.rhat);
    s.min_ess = std::min(s.min_ess, diag.ess);
    if (!(diag.rhat <= config.rhat_warning)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "non-convergence: R-hat %.4f for %s", diag.rhat, names[p].c_str());
      s.warnings.emplace_back(buf);
    }
  }
  if (config.keep_draws) {
    s.draws.parameters = names;
    for (std::size_t p = 0; p < lay.size(); ++p) s.draws.values.push_back(chains_of(p));
  }
  return s;
}

}  // namespace ergmpool
