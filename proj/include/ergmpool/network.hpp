#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ergmpool {

using Tie = std::pair<std::size_t, std::size_t>;

// One classroom wave: a fixed node set and a set of ordered ties without
// self-loops. Ties are held in a dense adjacency matrix; the networks of
// interest are classroom sized.
class DirectedNetwork {
 public:
  DirectedNetwork() = default;
  DirectedNetwork(std::string network_id, std::vector<std::string> node_ids,
                  std::string country = {}, std::string wave = {});
  // Anonymous nodes named "0".."n-1".
  static DirectedNetwork empty(std::size_t n, std::string network_id = "net");

  const std::string& id() const { return id_; }
  const std::string& country() const { return country_; }
  const std::string& wave() const { return wave_; }
  void set_country(std::string c) { country_ = std::move(c); }
  void set_wave(std::string w) { wave_ = std::move(w); }

  std::size_t size() const { return node_ids_.size(); }
  const std::vector<std::string>& node_ids() const { return node_ids_; }
  std::optional<std::size_t> index_of(std::string_view node_id) const;

  bool has_tie(std::size_t i, std::size_t j) const { return adj_[i * size() + j] != 0; }
  // Throws ValidationError on self-loops or out-of-range indices.
  void add_tie(std::size_t i, std::size_t j);
  void remove_tie(std::size_t i, std::size_t j);
  void toggle_tie(std::size_t i, std::size_t j);

  std::size_t edge_count() const { return edge_count_; }
  std::size_t out_degree(std::size_t i) const;
  std::size_t in_degree(std::size_t j) const;
  // Row-major (source, target) order.
  std::vector<Tie> ties() const;
  DirectedNetwork transposed() const;

  friend bool operator==(const DirectedNetwork& a, const DirectedNetwork& b) {
    return a.node_ids_ == b.node_ids_ && a.adj_ == b.adj_;
  }

 private:
  void check_pair(std::size_t i, std::size_t j) const;

  std::string id_;
  std::string country_;
  std::string wave_;
  std::vector<std::string> node_ids_;
  std::vector<std::uint8_t> adj_;
  std::size_t edge_count_ = 0;
};

inline constexpr std::size_t kSkillItemCount = 21;

struct NodeAttributes {
  std::optional<int> female;
  std::array<std::optional<int>, kSkillItemCount> skill_items{};
  std::optional<double> skills;
  std::optional<double> perceived_skills;

  friend bool operator==(const NodeAttributes&, const NodeAttributes&) = default;
};

// One row per node of the owning network, in node index order.
struct AttributeTable {
  std::vector<NodeAttributes> rows;

  std::size_t size() const { return rows.size(); }
  // Values of a named covariate ("female", "skills", "perceived_skills").
  std::vector<std::optional<double>> column(std::string_view attr) const;
  // As column(), throwing MissingCovariateError if any node lacks a value.
  std::vector<double> complete_column(std::string_view attr) const;

  friend bool operator==(const AttributeTable&, const AttributeTable&) = default;
};

bool is_known_attribute(std::string_view attr);
// "female" is the only categorical covariate.
bool is_categorical_attribute(std::string_view attr);

struct Rating {
  std::size_t rater;
  std::size_t target;
  int score;

  friend bool operator==(const Rating&, const Rating&) = default;
};

struct RatingEdgeList {
  std::vector<Rating> ratings;

  friend bool operator==(const RatingEdgeList&, const RatingEdgeList&) = default;
};

// Mean incoming rating per node rescaled with the instrument anchors
// (1 -> 0, 5 -> 1). Nodes without incoming ratings are missing.
std::vector<std::optional<double>> derive_perceived_skills(const DirectedNetwork& network,
                                                           const RatingEdgeList& ratings);
// Unscaled mean incoming rating, kept for descriptive reporting.
std::vector<std::optional<double>> mean_incoming_rating(const DirectedNetwork& network,
                                                        const RatingEdgeList& ratings);

struct CompositeOptions {
  // Response 0 ("I don't understand") recodes to the lowest level; when
  // false it is treated as missing.
  bool recode_zero_as_lowest = true;
};

std::optional<double> derive_composite_skills(
    const std::array<std::optional<int>, kSkillItemCount>& items,
    const CompositeOptions& options = {});

struct NetworkDescription {
  std::size_t edge_count = 0;
  double density = 0.0;
  std::size_t reciprocated_dyad_count = 0;
  double mean_outdegree = 0.0;
};

NetworkDescription describe(const DirectedNetwork& network);

}  // namespace ergmpool
