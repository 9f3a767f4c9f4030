#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ergmpool/error.hpp"
#include "ergmpool/pool.hpp"
#include "ergmpool/rng.hpp"

using namespace ergmpool;

namespace {

EffectObservation obs(std::string id, std::string country, double est, double se) {
  return {std::move(id), std::move(country), "nodematch.female", est, se};
}

// Draws from the generative model with a common mean across countries.
std::vector<EffectObservation> synthetic(std::size_t k, double mu, double tau, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<EffectObservation> out;
  const char* countries[] = {"DE", "IT", "PT"};
  for (std::size_t i = 0; i < k; ++i) {
    const double se = 0.2 + 0.3 * uniform01(rng);
    const double theta = mu + tau * normal(rng);
    out.push_back(obs("n" + std::to_string(i), countries[i % 3], theta + se * normal(rng), se));
  }
  return out;
}

}  // namespace

TEST_CASE("fixed-effect reference") {
  auto [m, se] = fixed_effect_reference({obs("a", "DE", 1.0, 1.0), obs("b", "DE", 3.0, 1.0)});
  CHECK(m == doctest::Approx(2.0));
  CHECK(se == doctest::Approx(0.7071).epsilon(1e-4));
  std::tie(m, se) = fixed_effect_reference({obs("a", "DE", 1.0, 1.0), obs("b", "DE", 1.0, 2.0)});
  CHECK(m == doctest::Approx(1.0));
  CHECK(se == doctest::Approx(std::sqrt(1.0 / 1.25)));
  CHECK(se == doctest::Approx(0.8944).epsilon(1e-4));
  std::tie(m, se) = fixed_effect_reference({obs("a", "DE", -0.3, 0.4)});
  CHECK(m == -0.3);
  CHECK(se == doctest::Approx(0.4));
}

TEST_CASE("single observation conjugate normal-normal") {
  PoolConfig cfg;
  cfg.fixed_tau = 0.0;
  cfg.fixed_alpha = 0.0;
  cfg.seed = 5;
  const auto s = pool({obs("a", "DE", 1.0, 1.0)}, cfg);
  const double mc_se = std::sqrt(0.5 / s.diagnostics[0].diagnostics.ess);
  CHECK(s.diagnostics[0].diagnostics.ess >= 1000.0);
  CHECK(std::abs(s.pooled.mean - 0.5) < 4.0 * mc_se);
  CHECK(std::abs(s.pooled.sd * s.pooled.sd - 0.5) < 0.05);
}

TEST_CASE("two observations with a diffuse mean layer give the weighted mean") {
  PoolConfig cfg;
  cfg.fixed_tau = 0.0;
  cfg.mu_sd = 1e6;
  cfg.seed = 6;
  const auto s = pool({obs("a", "DE", 1.0, 1.0), obs("b", "DE", 3.0, 1.0)}, cfg);
  CHECK(std::abs(s.pooled.mean - 2.0) < 1e-3);
  CHECK(s.pooled.sd == doctest::Approx(std::sqrt(0.5)).epsilon(0.05));
}

TEST_CASE("posterior shrinks each network towards its country mean") {
  PoolConfig cfg;
  cfg.seed = 7;
  const auto s = pool(synthetic(30, 0.8, 0.4, 70), cfg);
  for (const auto& net : s.networks) {
    const auto& country = *std::find_if(s.countries.begin(), s.countries.end(),
                                        [&](const auto& c) { return c.country == net.country; });
    const double lo = std::min(net.estimate, country.mu.mean) - 0.02;
    const double hi = std::max(net.estimate, country.mu.mean) + 0.02;
    CHECK(net.theta.mean >= lo);
    CHECK(net.theta.mean <= hi);
  }
}

TEST_CASE("observation order does not change the output") {
  PoolConfig cfg;
  cfg.seed = 8;
  cfg.iterations = 1000;
  cfg.warmup = 500;
  auto data = synthetic(12, 0.5, 0.2, 80);
  const auto a = pool(data, cfg);
  std::reverse(data.begin(), data.end());
  std::rotate(data.begin(), data.begin() + 5, data.end());
  const auto b = pool(data, cfg);
  CHECK(a.pooled.mean == b.pooled.mean);
  CHECK(a.pooled.lower == b.pooled.lower);
  CHECK(a.tau.median == b.tau.median);
  for (std::size_t k = 0; k < a.networks.size(); ++k) CHECK(a.networks[k].theta.mean == b.networks[k].theta.mean);
}

TEST_CASE("parallel chains reproduce serial chains") {
  PoolConfig cfg;
  cfg.seed = 9;
  cfg.iterations = 800;
  cfg.warmup = 400;
  const auto data = synthetic(10, 0.5, 0.2, 90);
  const auto serial = pool(data, cfg);
  cfg.workers = 4;
  const auto parallel = pool(data, cfg);
  CHECK(serial.pooled.mean == parallel.pooled.mean);
  CHECK(serial.tau.mean == parallel.tau.mean);
}

TEST_CASE("two observations give a finite positive tau median") {
  PoolConfig cfg;
  cfg.seed = 10;
  const auto s = pool({obs("a", "DE", 0.2, 0.3), obs("b", "IT", 1.4, 0.3)}, cfg);
  CHECK(std::isfinite(s.tau.median));
  CHECK(s.tau.median > 0.0);
  CHECK(s.pooled.lower <= s.pooled.upper);
}

TEST_CASE("pooled interval covers the generating mean") {
  PoolConfig cfg;
  int covered = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    cfg.seed = 1000 + rep;
    const auto s = pool(synthetic(30, 1.05, 0.3, 5000 + rep), cfg);
    covered += s.pooled.lower <= 1.05 && 1.05 <= s.pooled.upper;
  }
  CHECK(covered >= 90);
}

TEST_CASE("pool input validation") {
  PoolConfig cfg;
  CHECK_THROWS_AS(pool({obs("a", "DE", 1.0, 0.0)}, cfg), ValidationError);
  CHECK_THROWS_AS(pool({obs("a", "DE", 1.0, -1.0)}, cfg), ValidationError);
  CHECK_THROWS_AS(pool({}, cfg), EmptyPoolError);
  cfg.chains = 1;
  CHECK_THROWS_AS(pool({obs("a", "DE", 1.0, 1.0)}, cfg), ValidationError);
  cfg.chains = 4;
  cfg.warmup = cfg.iterations;
  CHECK_THROWS_AS(pool({obs("a", "DE", 1.0, 1.0)}, cfg), ValidationError);
}

TEST_CASE("draws are kept on request with named parameters") {
  PoolConfig cfg;
  cfg.iterations = 200;
  cfg.warmup = 100;
  cfg.keep_draws = true;
  const auto s = pool(synthetic(6, 0.0, 0.1, 3), cfg);
  CHECK(s.draws.of("mu").size() == 4);
  CHECK(s.draws.of("mu")[0].size() == 100);
  CHECK(s.draws.of("theta[n0]").size() == 4);
  CHECK(s.draws.of("mu[DE]").size() == 4);
  CHECK_THROWS_AS(s.draws.of("nope"), ValidationError);
}
