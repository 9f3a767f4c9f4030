#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "ergmpool/error.hpp"
#include "ergmpool/network.hpp"
#include "test_support.hpp"

using namespace ergmpool;

TEST_CASE("describe counts ties, density and reciprocated dyads") {
  auto net = DirectedNetwork::empty(3);
  net.add_tie(0, 1);
  net.add_tie(1, 0);
  net.add_tie(1, 2);
  const auto d = describe(net);
  CHECK(d.edge_count == 3);
  CHECK(d.density == doctest::Approx(0.5));
  CHECK(d.reciprocated_dyad_count == 1);
  CHECK(d.mean_outdegree == doctest::Approx(1.0));
}

TEST_CASE("describe zero and saturated networks") {
  CHECK(describe(DirectedNetwork::empty(5)).density == 0.0);
  auto full = DirectedNetwork::empty(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) full.add_tie(i, j);
  CHECK(describe(full).density == 1.0);
  CHECK(describe(full).reciprocated_dyad_count == 3);
  CHECK_THROWS_AS(describe(DirectedNetwork::empty(1)), DegenerateNetworkError);
}

TEST_CASE("describe bounds hold on random networks") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const auto n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    const auto net = testing::random_network(n, uniform01(rng), rng);
    const auto d = describe(net);
    CHECK(d.density >= 0.0);
    CHECK(d.density <= 1.0);
    CHECK(2 * d.reciprocated_dyad_count <= d.edge_count);
  }
}

TEST_CASE("network rejects self-loops and duplicate node ids") {
  auto net = DirectedNetwork::empty(3);
  CHECK_THROWS_AS(net.add_tie(1, 1), ValidationError);
  CHECK_THROWS_AS(net.add_tie(0, 3), ValidationError);
  CHECK_THROWS_AS(DirectedNetwork("x", {"a", "a"}), ValidationError);
}

TEST_CASE("perceived skills average incoming ratings on the instrument anchors") {
  auto net = DirectedNetwork::empty(4);
  RatingEdgeList ratings{{{0, 3, 2}, {1, 3, 3}, {2, 3, 5}, {0, 1, 1}, {2, 1, 1}, {3, 1, 1}}};
  const auto raw = mean_incoming_rating(net, ratings);
  REQUIRE(raw[3]);
  CHECK(*raw[3] == doctest::Approx(10.0 / 3.0));
  const auto scaled = derive_perceived_skills(net, ratings);
  CHECK(*scaled[3] == doctest::Approx((10.0 / 3.0 - 1.0) / 4.0));
  CHECK(*scaled[3] == doctest::Approx(0.583).epsilon(1e-3));
  CHECK(*scaled[1] == 0.0);
  CHECK_FALSE(scaled[0].has_value());
  CHECK_FALSE(scaled[2].has_value());
}

TEST_CASE("perceived skills reject out-of-range scores") {
  auto net = DirectedNetwork::empty(2);
  CHECK_THROWS_AS(derive_perceived_skills(net, RatingEdgeList{{{0, 1, 6}}}), ValidationError);
  CHECK_THROWS_AS(derive_perceived_skills(net, RatingEdgeList{{{0, 0, 3}}}), ValidationError);
}

TEST_CASE("perceived skills are permutation equivariant") {
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 7;
    auto net = DirectedNetwork::empty(n);
    RatingEdgeList ratings;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && uniform01(rng) < 0.3)
          ratings.ratings.push_back({i, j, std::uniform_int_distribution<int>(1, 5)(rng)});
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RatingEdgeList relabelled;
    for (const auto& r : ratings.ratings) relabelled.ratings.push_back({perm[r.rater], perm[r.target], r.score});
    const auto a = derive_perceived_skills(net, ratings);
    const auto b = derive_perceived_skills(net, relabelled);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(a[i].has_value() == b[perm[i]].has_value());
      if (a[i]) CHECK(*a[i] == doctest::Approx(*b[perm[i]]).epsilon(1e-14));
    }
  }
}

TEST_CASE("composite skills anchors and recoding") {
  std::array<std::optional<int>, kSkillItemCount> items;
  items.fill(5);
  CHECK(*derive_composite_skills(items) == 1.0);
  items.fill(1);
  CHECK(*derive_composite_skills(items) == 0.0);
  items.fill(0);
  CHECK(*derive_composite_skills(items) == 0.0);
  CHECK_FALSE(derive_composite_skills(items, {.recode_zero_as_lowest = false}).has_value());

  // 21 alternating items: eleven 1s and ten 5s.
  for (std::size_t k = 0; k < kSkillItemCount; ++k) items[k] = k % 2 == 0 ? 1 : 5;
  CHECK(*derive_composite_skills(items) == doctest::Approx((61.0 / 21.0 - 1.0) / 4.0));
  // Balanced mix (last item missing): mean exactly 3.
  items[20].reset();
  CHECK(*derive_composite_skills(items) == doctest::Approx(0.5));
}

TEST_CASE("composite skills missing when more than half the items are missing") {
  std::array<std::optional<int>, kSkillItemCount> items{};
  for (std::size_t k = 0; k < 10; ++k) items[k] = 3;
  CHECK_FALSE(derive_composite_skills(items).has_value());
  items[10] = 3;
  CHECK(*derive_composite_skills(items) == doctest::Approx(0.5));
}

TEST_CASE("attribute columns") {
  AttributeTable t;
  t.rows.resize(2);
  t.rows[0].female = 1;
  t.rows[0].skills = 0.3;
  CHECK(*t.column("female")[0] == 1.0);
  CHECK_FALSE(t.column("female")[1].has_value());
  CHECK_THROWS_AS(t.complete_column("skills"), MissingCovariateError);
  CHECK_THROWS_AS(t.column("height"), ValidationError);
}
