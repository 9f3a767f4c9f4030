#include <doctest.h>

#include "ergmpool/error.hpp"
#include "ergmpool/terms.hpp"
#include "test_support.hpp"

using namespace ergmpool;
using K = TermKind;

namespace {

ModelSpec all_six() {
  ModelSpec m;
  m.terms = {{K::Edges, ""},          {K::Mutual, ""},          {K::NodeOCov, "skills"},
             {K::NodeICov, "skills"}, {K::AbsDiff, "skills"}, {K::NodeMatch, "female"}};
  return m;
}

DirectedNetwork example_network() {
  auto net = DirectedNetwork::empty(3);
  net.add_tie(0, 1);
  net.add_tie(1, 0);
  net.add_tie(1, 2);
  return net;
}

}  // namespace

TEST_CASE("sufficient statistics of the three-tie example") {
  const auto attrs = testing::skills_table({0.2, 0.5, 0.9}, {1, 0, 1});
  const auto g = sufficient_stats(example_network(), attrs, all_six());
  REQUIRE(g.size() == 6);
  CHECK(g[0] == 3.0);
  CHECK(g[1] == 1.0);
  CHECK(g[2] == doctest::Approx(1.2));
  CHECK(g[3] == doctest::Approx(1.6));
  CHECK(g[4] == doctest::Approx(1.0));
  CHECK(g[5] == 0.0);
}

TEST_CASE("sufficient statistics of trivial networks") {
  const auto attrs = testing::skills_table({0.2, 0.5, 0.9}, {1, 0, 1});
  CHECK(sufficient_stats(DirectedNetwork::empty(3), attrs, all_six()).isZero());
  ModelSpec em;
  em.terms = {{K::Edges, ""}, {K::Mutual, ""}};
  auto pair = DirectedNetwork::empty(2);
  pair.add_tie(0, 1);
  pair.add_tie(1, 0);
  const auto g = sufficient_stats(pair, testing::skills_table({0, 0}, {}), em);
  CHECK(g[0] == 2.0);
  CHECK(g[1] == 1.0);
}

TEST_CASE("missing covariates are rejected") {
  auto attrs = testing::skills_table({0.2, 0.5, 0.9}, {1, 0, 1});
  attrs.rows[2].female.reset();
  CHECK_THROWS_AS(sufficient_stats(example_network(), attrs, all_six()), MissingCovariateError);
}

TEST_CASE("change statistics examples") {
  const auto attrs = testing::skills_table({0.2, 0.5, 0.9}, {1, 0, 1});
  auto net = DirectedNetwork::empty(3);
  net.add_tie(1, 2);
  auto d = change_stats(net, attrs, all_six(), 2, 1);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 1.0);
  d = change_stats(net, attrs, all_six(), 0, 1);
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 0.0);
  CHECK(d[2] == doctest::Approx(0.2));
  CHECK(d[3] == doctest::Approx(0.5));
  CHECK(d[4] == doctest::Approx(0.3));
  CHECK(d[5] == 0.0);
  CHECK_THROWS_AS(change_stats(net, attrs, all_six(), 1, 1), ValidationError);
}

TEST_CASE("toggle consistency on random instances") {
  Rng rng(31);
  for (int rep = 0; rep < 500; ++rep) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 9)(rng);
    auto net = testing::random_network(n, uniform01(rng), rng);
    const auto attrs = testing::random_attributes(n, rng);
    const auto model = testing::random_model(rng);
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    std::size_t i = node(rng), j = node(rng);
    if (i == j) continue;
    auto with = net, without = net;
    with.add_tie(i, j);
    without.remove_tie(i, j);
    const Eigen::VectorXd diff = sufficient_stats(with, attrs, model) - sufficient_stats(without, attrs, model);
    const Eigen::VectorXd delta = change_stats(net, attrs, model, i, j);
    CHECK((diff - delta).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("change statistics depend only on the dyad") {
  Rng rng(37);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 6;
    auto net = testing::random_network(n, 0.4, rng);
    const auto attrs = testing::random_attributes(n, rng);
    const auto model = testing::random_model(rng);
    const Eigen::VectorXd before = change_stats(net, attrs, model, 0, 1);
    // Toggle a tie outside the dyad {0,1}.
    std::uniform_int_distribution<std::size_t> node(2, n - 1), any(0, n - 1);
    const std::size_t a = any(rng), b = node(rng);
    if (a == b) continue;
    net.toggle_tie(a, b);
    CHECK(change_stats(net, attrs, model, 0, 1) == before);
    // The reverse tie moves only the Mutual component.
    net.toggle_tie(1, 0);
    const Eigen::VectorXd after = change_stats(net, attrs, model, 0, 1);
    for (std::size_t k = 0; k < model.size(); ++k)
      if (model.terms[k].kind != K::Mutual) CHECK(after[static_cast<Eigen::Index>(k)] == before[static_cast<Eigen::Index>(k)]);
  }
}

TEST_CASE("dyad log-weights sum to theta dot g") {
  Rng rng(41);
  std::normal_distribution<double> normal(0.0, 1.5);
  for (int rep = 0; rep < 300; ++rep) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const auto net = testing::random_network(n, uniform01(rng), rng);
    const auto attrs = testing::random_attributes(n, rng);
    const auto model = testing::random_model(rng);
    Eigen::VectorXd theta(static_cast<Eigen::Index>(model.size()));
    for (auto& t : theta) t = normal(rng);
    const BoundModel bound(model, attrs);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        total += dyad_predictors(bound, i, j).log_weights(theta)[static_cast<std::size_t>(dyad_state(net, i, j))];
    CHECK(std::abs(total - theta.dot(sufficient_stats(net, bound))) < 1e-10);
  }
}

TEST_CASE("dyad predictors examples") {
  const auto attrs = testing::skills_table({0.2, 0.5, 0.9}, {1, 1, 0});
  ModelSpec edges_only;
  edges_only.terms = {{K::Edges, ""}};
  Eigen::VectorXd te(1);
  te << -1.7;
  auto d = dyad_predictors(attrs, edges_only, 0, 1);
  auto lw = d.log_weights(te);
  CHECK(lw[1] == -1.7);
  CHECK(lw[2] == -1.7);
  CHECK_FALSE(d.mutual_index.has_value());

  ModelSpec match;
  match.terms = {{K::Edges, ""}, {K::NodeMatch, "female"}};
  Eigen::VectorXd tm(2);
  tm << -2.0, 0.8;
  lw = dyad_predictors(attrs, match, 0, 1).log_weights(tm);
  CHECK(lw[1] == doctest::Approx(-1.2));
  CHECK(lw[2] == doctest::Approx(-1.2));
  lw = dyad_predictors(attrs, match, 0, 2).log_weights(tm);
  CHECK(lw[1] == doctest::Approx(-2.0));

  ModelSpec em;
  em.terms = {{K::Edges, ""}, {K::Mutual, ""}};
  Eigen::VectorXd tem(2);
  tem << -1.0, 2.5;
  d = dyad_predictors(attrs, em, 1, 2);
  REQUIRE(d.mutual_index == std::optional<std::size_t>(1));
  lw = d.log_weights(tem);
  CHECK(lw[0] == 0.0);
  CHECK(lw[1] == -1.0);
  CHECK(lw[2] == -1.0);
  CHECK(lw[3] == doctest::Approx(0.5));
}

TEST_CASE("homophily terms are symmetric and sender/receiver swap under transposition") {
  Rng rng(43);
  ModelSpec m;
  m.terms = {{K::Edges, ""}, {K::NodeOCov, "skills"}, {K::NodeICov, "skills"}, {K::AbsDiff, "skills"},
             {K::NodeMatch, "female"}};
  ModelSpec swapped = m;
  std::swap(swapped.terms[1], swapped.terms[2]);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 7;
    const auto net = testing::random_network(n, 0.3, rng);
    const auto attrs = testing::random_attributes(n, rng);
    const auto a = change_stats(net, attrs, m, 2, 5);
    const auto b = change_stats(net, attrs, m, 5, 2);
    CHECK(a[3] == b[3]);
    CHECK(a[4] == b[4]);
    const auto g = sufficient_stats(net, attrs, m);
    const auto gt = sufficient_stats(net.transposed(), attrs, swapped);
    CHECK((g - gt).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("presets transcribe the four statistic vectors in order") {
  CHECK(ModelSpec::preset_model("rq1").term_names() ==
        std::vector<std::string>{"edges", "mutual", "nodeocov.skills", "nodeicov.skills",
                                 "nodeocov.perceived_skills", "nodeicov.perceived_skills",
                                 "absdiff.skills"});
  CHECK(ModelSpec::preset_model("rq2").term_names().back() == "nodeocov.female");
  CHECK(ModelSpec::preset_model("rq2").size() == 8);
  CHECK(ModelSpec::preset_model("h1").term_names() ==
        std::vector<std::string>{"edges", "mutual", "nodeicov.female"});
  CHECK(ModelSpec::preset_model("h2").term_names() ==
        std::vector<std::string>{"edges", "mutual", "nodematch.female"});
  CHECK_THROWS_AS(ModelSpec::preset_model("rq3"), ValidationError);
}

TEST_CASE("model validation") {
  ModelSpec m;
  m.terms = {{K::Mutual, ""}};
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m.terms = {{K::Edges, ""}, {K::Edges, ""}};
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m.terms = {{K::Edges, ""}, {K::NodeOCov, "height"}};
  CHECK_THROWS_AS(m.validate(), ValidationError);
  CHECK_THROWS_AS(parse_kind("triangle"), UnsupportedTermError);
  CHECK(parse_kind("NodeMatch") == K::NodeMatch);
}
