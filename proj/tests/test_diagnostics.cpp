#include <doctest.h>

#include <cmath>

#include "ergmpool/diagnostics.hpp"
#include "ergmpool/error.hpp"
#include "ergmpool/rng.hpp"

using namespace ergmpool;

namespace {
std::vector<std::vector<double>> normal_chains(std::size_t chains, std::size_t draws,
                                               std::vector<double> centres, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> out(chains);
  for (std::size_t c = 0; c < chains; ++c)
    for (std::size_t i = 0; i < draws; ++i) out[c].push_back(centres[c % centres.size()] + normal(rng));
  return out;
}
}  // namespace

TEST_CASE("well-mixed chains have R-hat near one") {
  const auto d = diagnose(normal_chains(4, 1000, {0.0}, 1));
  CHECK(d.rhat >= 0.99);
  CHECK(d.rhat <= 1.01);
  CHECK_FALSE(d.degenerate);
}

TEST_CASE("separated chains have large R-hat") {
  const auto d = diagnose(normal_chains(2, 500, {-5.0, 5.0}, 2));
  CHECK(d.rhat > 1.1);
  CHECK(split_rhat(normal_chains(2, 500, {-5.0, 5.0}, 2)) > 1.1);
}

TEST_CASE("ESS of independent draws is close to the draw count") {
  for (std::uint64_t seed = 3; seed < 8; ++seed) {
    const auto d = diagnose(normal_chains(4, 1000, {0.0}, seed));
    CHECK(std::abs(d.ess - 4000.0) < 0.2 * 4000.0);
  }
}

TEST_CASE("autocorrelated chains have reduced ESS") {
  Rng rng(9);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> chains(4);
  for (auto& c : chains) {
    double x = 0;
    for (int i = 0; i < 2000; ++i) c.push_back(x = 0.9 * x + normal(rng));
  }
  // AR(1) with rho 0.9: ESS / N = (1 - rho) / (1 + rho).
  const double expected = 8000.0 * 0.1 / 1.9;
  CHECK(std::abs(diagnose(chains).ess - expected) < 0.3 * expected);
}

TEST_CASE("constant chains are degenerate") {
  const auto d = diagnose({{1.0, 1.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}});
  CHECK(d.degenerate);
  CHECK(std::isnan(d.rhat));
}

TEST_CASE("diagnostics shape errors") {
  CHECK_THROWS_AS(diagnose({{1.0, 2.0, 3.0, 4.0}}), ValidationError);
  CHECK_THROWS_AS(diagnose({{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}}), ValidationError);
}
