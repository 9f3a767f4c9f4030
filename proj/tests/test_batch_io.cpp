#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ergmpool/batch_io.hpp"
#include "ergmpool/error.hpp"
#include "ergmpool/rng.hpp"
#include "test_support.hpp"

using namespace ergmpool;
using ergmpool::testing::TempDir;
namespace fs = std::filesystem;

namespace {

std::string attributes_header() {
  std::string h = "network_id,node_id,country,wave,female";
  for (int k = 1; k <= 21; ++k) h += (k < 10 ? ",item_0" : ",item_") + std::to_string(k);
  return h + "\n";
}

std::string attribute_row(const std::string& net, const std::string& node, const std::string& female,
                          int item) {
  std::string r = net + "," + node + ",DE,w1," + female;
  for (int k = 0; k < 21; ++k) r += "," + std::to_string(item);
  return r + "\n";
}

}  // namespace

TEST_CASE("load_batch reads a two-node network") {
  TempDir dir;
  auto edges = dir.write("edges.csv", "network_id,source,target\nc1,A,B\nc1,B,A\n");
  auto attrs = dir.write("attrs.csv", attributes_header() + attribute_row("c1", "A", "1", 3) +
                                          attribute_row("c1", "B", "", 5));
  auto ratings = dir.write("ratings.csv", "network_id,rater,target,score\nc1,A,B,4\n");
  const auto batch = load_batch(edges, attrs, ratings);
  REQUIRE(batch.size() == 1);
  const auto& d = batch[0];
  CHECK(d.network.id() == "c1");
  CHECK(d.network.size() == 2);
  CHECK(d.network.ties() == std::vector<Tie>{{0, 1}, {1, 0}});
  CHECK(d.network.country() == "DE");
  CHECK(*d.attributes.rows[0].female == 1);
  CHECK_FALSE(d.attributes.rows[1].female.has_value());
  CHECK(*d.attributes.rows[1].skill_items[20] == 5);
  REQUIRE(d.ratings.ratings.size() == 1);
  CHECK(d.ratings.ratings[0] == Rating{0, 1, 4});
}

TEST_CASE("load_batch validation errors") {
  TempDir dir;
  auto attrs = dir.write("attrs.csv", attributes_header() + attribute_row("c1", "A", "1", 3) +
                                          attribute_row("c1", "B", "0", 3));
  SUBCASE("self-loop") {
    auto edges = dir.write("e.csv", "network_id,source,target\nc1,A,A\n");
    CHECK_THROWS_AS(load_batch(edges, attrs, std::nullopt), ValidationError);
  }
  SUBCASE("unknown node") {
    auto edges = dir.write("e.csv", "network_id,source,target\nc1,A,Z\n");
    CHECK_THROWS_WITH_AS(load_batch(edges, attrs, std::nullopt),
                         doctest::Contains("unknown node 'Z'"), ValidationError);
  }
  SUBCASE("duplicate tie") {
    auto edges = dir.write("e.csv", "network_id,source,target\nc1,A,B\nc1,A,B\n");
    CHECK_THROWS_AS(load_batch(edges, attrs, std::nullopt), ValidationError);
  }
  SUBCASE("malformed row names file and line") {
    auto edges = dir.write("e.csv", "network_id,source,target\nc1,A,B\nc1,B\n");
    CHECK_THROWS_WITH_AS(load_batch(edges, attrs, std::nullopt), doctest::Contains("e.csv:3"),
                         ParseError);
  }
  SUBCASE("bad female value") {
    auto bad = dir.write("bad.csv", attributes_header() + attribute_row("c1", "A", "2", 3));
    auto edges = dir.write("e.csv", "network_id,source,target\n");
    CHECK_THROWS_AS(load_batch(edges, bad, std::nullopt), ValidationError);
  }
  SUBCASE("duplicate rating") {
    auto edges = dir.write("e.csv", "network_id,source,target\n");
    auto ratings = dir.write("r.csv", "network_id,rater,target,score\nc1,A,B,3\nc1,A,B,4\n");
    CHECK_THROWS_AS(load_batch(edges, attrs, ratings), ValidationError);
  }
}

TEST_CASE("write_batch round-trips ties, attributes and ratings") {
  TempDir dir;
  Rng rng(99);
  std::vector<NetworkData> batch;
  for (int k = 0; k < 4; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(k) + "_" + std::to_string(i));
    NetworkData d{DirectedNetwork("net" + std::to_string(k), ids, k % 2 ? "IT" : "PT", "w2"), {}, {}};
    d.attributes.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& row = d.attributes.rows[i];
      if (uniform01(rng) < 0.8) row.female = uniform01(rng) < 0.5;
      for (auto& item : row.skill_items)
        if (uniform01(rng) < 0.9) item = std::uniform_int_distribution<int>(0, 5)(rng);
      row.skills = uniform01(rng);
      if (uniform01(rng) < 0.5) row.perceived_skills = uniform01(rng) / 3.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        if (uniform01(rng) < 0.4) d.network.add_tie(i, j);
        if (uniform01(rng) < 0.3)
          d.ratings.ratings.push_back({i, j, std::uniform_int_distribution<int>(1, 5)(rng)});
      }
    }
    batch.push_back(std::move(d));
  }
  write_batch(batch, dir.path / "e.csv", dir.path / "a.csv", dir.path / "r.csv");
  const auto back = load_batch(dir.path / "e.csv", dir.path / "a.csv", dir.path / "r.csv");
  REQUIRE(back.size() == batch.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    CHECK(back[k].network == batch[k].network);
    CHECK(back[k].network.country() == batch[k].network.country());
    CHECK(back[k].attributes == batch[k].attributes);
    CHECK(back[k].ratings == batch[k].ratings);
  }
}
