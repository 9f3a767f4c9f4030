#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "ergmpool/diagnostics.hpp"
#include "ergmpool/error.hpp"
#include "ergmpool/fit.hpp"
#include "ergmpool/sim.hpp"
#include "test_support.hpp"

using namespace ergmpool;
using K = TermKind;

namespace {

ModelSpec terms_model(std::vector<TermSpec> terms) {
  ModelSpec m;
  m.terms = std::move(terms);
  return m;
}

SimConfig config(std::size_t n, ModelSpec model, std::vector<double> theta, std::uint64_t seed) {
  SimConfig c;
  c.n = n;
  c.model = std::move(model);
  c.theta = Eigen::Map<Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
  c.seed = seed;
  return c;
}

struct Moments {
  double mean = 0, se = 0;
};

Moments moments(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
}

}  // namespace

TEST_CASE("exact sampler with theta = 0 draws fair coins") {
  const auto model = ModelSpec::preset_model("h2");
  Rng rng(1);
  const auto attrs = testing::random_attributes(10, rng);
  std::vector<double> density;
  for (std::uint64_t s = 0; s < 10000; ++s)
    density.push_back(describe(sample_exact(config(10, model, {0, 0, 0}, s), attrs)).density);
  const auto m = moments(density);
  CHECK(std::abs(m.mean - 0.5) < 3.0 * m.se);
}

TEST_CASE("Bernoulli graph density") {
  const auto model = terms_model({{K::Edges, ""}});
  Rng rng(2);
  const auto attrs = testing::random_attributes(12, rng);
  const double th = std::log(0.1 / 0.9);
  std::vector<double> density;
  for (std::uint64_t s = 0; s < 3000; ++s)
    density.push_back(describe(sample_exact(config(12, model, {th}, s), attrs)).density);
  const auto m = moments(density);
  CHECK(std::abs(m.mean - 0.1) < 3.0 * m.se);
}

TEST_CASE("strong reciprocity suppresses asymmetric dyads") {
  // Per dyad weights {1, 1, 1, e^8}: P(asymmetric) = 2 / (3 + e^8) ~ 6.7e-4.
  const auto model = terms_model({{K::Edges, ""}, {K::Mutual, ""}});
  Rng rng(3);
  const auto attrs = testing::random_attributes(20, rng);
  const auto net = sample_exact(config(20, model, {0.0, 8.0}, 9), attrs);
  std::size_t asym = 0;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = i + 1; j < 20; ++j) asym += (dyad_state(net, i, j) == 1 || dyad_state(net, i, j) == 2);
  CHECK(asym <= 3);
  CHECK(describe(net).reciprocated_dyad_count > 150);
}

TEST_CASE("n = 2 dyad-state frequencies match the analytic probabilities") {
  const auto model = terms_model({{K::Edges, ""}, {K::Mutual, ""}, {K::NodeOCov, "skills"}});
  const auto attrs = testing::skills_table({0.2, 0.9}, {0, 1});
  const std::vector<double> th{-0.4, 1.1, 0.7};
  const auto cfg0 = config(2, model, th, 0);
  const auto p = dyad_state_probabilities(dyad_predictors(attrs, model, 0, 1), cfg0.theta);
  std::array<double, 4> counts{};
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    const auto net = sample_exact(config(2, model, th, static_cast<std::uint64_t>(s)), attrs);
    counts[static_cast<std::size_t>(dyad_state(net, 0, 1))] += 1;
  }
  double chi2 = 0;
  for (std::size_t k = 0; k < 4; ++k) chi2 += std::pow(counts[k] - draws * p[k], 2) / (draws * p[k]);
  CHECK(chi2 < boost::math::quantile(boost::math::chi_squared(3), 0.99));
}

TEST_CASE("exact sampler determinism and errors") {
  const auto model = ModelSpec::preset_model("h1");
  Rng rng(4);
  const auto attrs = testing::random_attributes(8, rng);
  auto cfg = config(8, model, {-1, 1, 0.5}, 77);
  CHECK(sample_exact(cfg, attrs) == sample_exact(cfg, attrs));
  cfg.outdegree_cap = 3;
  CHECK_THROWS_AS(sample_exact(cfg, attrs), UnsupportedConstraintError);
  cfg.outdegree_cap.reset();
  cfg.theta.resize(2);
  CHECK_THROWS_AS(sample_exact(cfg, attrs), ValidationError);
}

TEST_CASE("Metropolis respects the out-degree cap") {
  const auto model = ModelSpec::preset_model("h2");
  Rng rng(5);
  const auto attrs = testing::random_attributes(10, rng);
  auto cfg = config(10, model, {0.5, 0.5, 0.5}, 8);
  cfg.outdegree_cap = 3;
  cfg.metropolis.sample_count = 200;
  const auto nets = sample_metropolis(cfg, attrs);
  REQUIRE(nets.size() == 200);
  std::size_t saturated = 0;
  for (const auto& net : nets)
    for (std::size_t i = 0; i < 10; ++i) {
      CHECK(net.out_degree(i) <= 3);
      saturated += net.out_degree(i) == 3;
    }
  CHECK(saturated > 0);
}

TEST_CASE("Metropolis with theta = 0 has density one half") {
  const auto model = terms_model({{K::Edges, ""}});
  Rng rng(6);
  const auto attrs = testing::random_attributes(8, rng);
  auto cfg = config(8, model, {0.0}, 10);
  cfg.metropolis.sample_count = 2000;
  const auto nets = sample_metropolis(cfg, attrs);
  std::vector<std::vector<double>> chain(2);
  for (std::size_t k = 0; k < nets.size(); ++k) chain[k % 2].push_back(describe(nets[k]).density);
  const double ess = effective_sample_size(chain);
  std::vector<double> all(chain[0]);
  all.insert(all.end(), chain[1].begin(), chain[1].end());
  const auto m = moments(all);
  const double se = m.se * std::sqrt(static_cast<double>(all.size()) / ess);
  CHECK(std::abs(m.mean - 0.5) < 3.0 * se);
  cfg.metropolis.sample_count = 0;
  CHECK_THROWS_AS(sample_metropolis(cfg, attrs), ValidationError);
}

TEST_CASE("Metropolis is deterministic given the seed") {
  const auto model = ModelSpec::preset_model("h2");
  Rng rng(7);
  const auto attrs = testing::random_attributes(6, rng);
  auto cfg = config(6, model, {-1, 1, 1}, 3);
  cfg.metropolis.sample_count = 5;
  CHECK(sample_metropolis(cfg, attrs) == sample_metropolis(cfg, attrs));
}

TEST_CASE("generated attributes") {
  const auto a = generate_attributes(1000, 12);
  double sum = 0;
  for (const auto& r : a.rows) {
    REQUIRE(r.skills);
    REQUIRE(r.perceived_skills);
    CHECK(*r.skills >= 0.0);
    CHECK(*r.skills <= 1.0);
    CHECK(*r.perceived_skills >= 0.0);
    CHECK(*r.perceived_skills <= 1.0);
    CHECK((*r.female == 0 || *r.female == 1));
    sum += *r.skills;
  }
  CHECK(std::abs(sum / 1000.0 - 0.45) < 0.01);
  CHECK(generate_attributes(50, 3) == generate_attributes(50, 3));
  CHECK_FALSE(generate_attributes(50, 3) == generate_attributes(50, 4));
}

TEST_CASE("goodness of fit at the MLE is calibrated") {
  const auto model = ModelSpec::preset_model("h2");
  int inside = 0, total = 0;
  for (std::uint64_t rep = 0; rep < 40; ++rep) {
    const auto attrs = generate_attributes(15, rep);
    const auto net = sample_exact(config(15, model, {-2.0, 1.5, 0.8}, 100 + rep), attrs);
    const auto fit = fit_exact(net, attrs, model);
    const auto records = gof(net, attrs, model, fit.theta, rep, 1000);
    for (const auto& r : records) {
      ++total;
      inside += r.observed >= r.lower_1 && r.observed <= r.upper_99;
    }
  }
  CHECK(inside >= 0.95 * total);
}

TEST_CASE("goodness of fit detects a miscalibrated density") {
  const auto model = ModelSpec::preset_model("h2");
  const auto attrs = generate_attributes(15, 1);
  const auto net = sample_exact(config(15, model, {-2.0, 1.5, 0.8}, 5), attrs);
  auto theta = fit_exact(net, attrs, model).theta;
  theta[0] += 5.0;
  const auto records = gof(net, attrs, model, theta, 9, 1000);
  CHECK(records[0].observed < records[0].lower_1);
  CHECK(records[0].quantile < 0.01);
}

TEST_CASE("goodness of fit on an empty network at a near-empty theta") {
  const auto model = terms_model({{K::Edges, ""}});
  const auto attrs = generate_attributes(6, 1);
  Eigen::VectorXd theta(1);
  theta << -20.0;
  const auto records = gof(DirectedNetwork::empty(6), attrs, model, theta, 1, 1000);
  CHECK(records[0].observed == 0.0);
  CHECK(records[0].simulated_mean == 0.0);
  CHECK(records[0].quantile == doctest::Approx(0.5));
}
