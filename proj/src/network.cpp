#include "ergmpool/network.hpp"

#include <algorithm>
#include <set>

#include "ergmpool/error.hpp"

namespace ergmpool {

DirectedNetwork::DirectedNetwork(std::string network_id, std::vector<std::string> node_ids,
                                 std::string country, std::string wave)
    : id_(std::move(network_id)),
      country_(std::move(country)),
      wave_(std::move(wave)),
      node_ids_(std::move(node_ids)),
      adj_(node_ids_.size() * node_ids_.size(), 0) {
  std::set<std::string_view> seen;
  for (const auto& id : node_ids_) {
    if (!seen.insert(id).second)
      throw ValidationError("network " + id_ + ": duplicate node id '" + id + "'");
  }
}

DirectedNetwork DirectedNetwork::empty(std::size_t n, std::string network_id) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  return DirectedNetwork(std::move(network_id), std::move(ids));
}

std::optional<std::size_t> DirectedNetwork::index_of(std::string_view node_id) const {
  auto it = std::find(node_ids_.begin(), node_ids_.end(), node_id);
  if (it == node_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - node_ids_.begin());
}

void DirectedNetwork::check_pair(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size())
    throw ValidationError("network " + id_ + ": node index out of range");
  if (i == j) throw ValidationError("network " + id_ + ": self-loop on node '" + node_ids_[i] + "'");
}

void DirectedNetwork::add_tie(std::size_t i, std::size_t j) {
  check_pair(i, j);
  auto& cell = adj_[i * size() + j];
  if (!cell) {
    cell = 1;
    ++edge_count_;
  }
}

void DirectedNetwork::remove_tie(std::size_t i, std::size_t j) {
  check_pair(i, j);
  auto& cell = adj_[i * size() + j];
  if (cell) {
    cell = 0;
    --edge_count_;
  }
}

void DirectedNetwork::toggle_tie(std::size_t i, std::size_t j) {
  if (has_tie(i, j))
    remove_tie(i, j);
  else
    add_tie(i, j);
}

std::size_t DirectedNetwork::out_degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < size(); ++j) d += adj_[i * size() + j];
  return d;
}

std::size_t DirectedNetwork::in_degree(std::size_t j) const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < size(); ++i) d += adj_[i * size() + j];
  return d;
}

std::vector<Tie> DirectedNetwork::ties() const {
  std::vector<Tie> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (adj_[i * size() + j]) out.emplace_back(i, j);
  return out;
}

DirectedNetwork DirectedNetwork::transposed() const {
  DirectedNetwork t(id_, node_ids_, country_, wave_);
  for (auto [i, j] : ties()) t.add_tie(j, i);
  return t;
}

bool is_known_attribute(std::string_view attr) {
  return attr == "female" || attr == "skills" || attr == "perceived_skills";
}

bool is_categorical_attribute(std::string_view attr) { return attr == "female"; }

std::vector<std::optional<double>> AttributeTable::column(std::string_view attr) const {
  std::vector<std::optional<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    if (attr == "female") {
      out.push_back(r.female ? std::optional<double>(*r.female) : std::nullopt);
    } else if (attr == "skills") {
      out.push_back(r.skills);
    } else if (attr == "perceived_skills") {
      out.push_back(r.perceived_skills);
    } else {
      throw ValidationError("unknown attribute '" + std::string(attr) + "'");
    }
  }
  return out;
}

std::vector<double> AttributeTable::complete_column(std::string_view attr) const {
  auto col = column(attr);
  std::vector<double> out;
  out.reserve(col.size());
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (!col[i])
      throw MissingCovariateError("attribute '" + std::string(attr) + "' missing for node " +
                                  std::to_string(i));
    out.push_back(*col[i]);
  }
  return out;
}

std::vector<std::optional<double>> mean_incoming_rating(const DirectedNetwork& network,
                                                        const RatingEdgeList& ratings) {
  const auto n = network.size();
  std::vector<double> sum(n, 0.0);
  std::vector<int> count(n, 0);
  for (const auto& r : ratings.ratings) {
    if (r.rater >= n || r.target >= n)
      throw ValidationError("network " + network.id() + ": rating references unknown node");
    if (r.rater == r.target)
      throw ValidationError("network " + network.id() + ": self-rating");
    if (r.score < 1 || r.score > 5)
      throw ValidationError("network " + network.id() + ": rating score outside 1..5");
    sum[r.target] += r.score;
    ++count[r.target];
  }
  std::vector<std::optional<double>> out(n);
  for (std::size_t i = 0; i < n; ++i)
    if (count[i] > 0) out[i] = sum[i] / count[i];
  return out;
}

std::vector<std::optional<double>> derive_perceived_skills(const DirectedNetwork& network,
                                                           const RatingEdgeList& ratings) {
  auto out = mean_incoming_rating(network, ratings);
  for (auto& v : out)
    if (v) *v = (*v - 1.0) / 4.0;
  return out;
}

std::optional<double> derive_composite_skills(
    const std::array<std::optional<int>, kSkillItemCount>& items, const CompositeOptions& options) {
  double sum = 0.0;
  std::size_t observed = 0;
  for (const auto& item : items) {
    if (!item) continue;
    int v = *item;
    if (v < 0 || v > 5) throw ValidationError("skill item response outside 0..5");
    if (v == 0) {
      if (!options.recode_zero_as_lowest) continue;
      v = 1;
    }
    sum += v;
    ++observed;
  }
  // More than half missing -> missing composite.
  if (2 * observed < kSkillItemCount) return std::nullopt;
  return (sum / static_cast<double>(observed) - 1.0) / 4.0;
}

NetworkDescription describe(const DirectedNetwork& network) {
  const auto n = network.size();
  if (n < 2) throw DegenerateNetworkError("network " + network.id() + ": fewer than two nodes");
  NetworkDescription d;
  d.edge_count = network.edge_count();
  d.density = static_cast<double>(d.edge_count) / static_cast<double>(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (network.has_tie(i, j) && network.has_tie(j, i)) ++d.reciprocated_dyad_count;
  d.mean_outdegree = static_cast<double>(d.edge_count) / static_cast<double>(n);
  return d;
}

}  // namespace ergmpool
