#pragma once

#include <Eigen/Core>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergmpool/network.hpp"

namespace ergmpool {

enum class TermKind { Edges, Mutual, NodeOCov, NodeICov, AbsDiff, NodeMatch };

struct TermSpec {
  TermKind kind = TermKind::Edges;
  std::string attr;  // empty for Edges and Mutual

  // Canonical label such as "edges", "nodeocov.skills".
  std::string name() const;
  friend bool operator==(const TermSpec&, const TermSpec&) = default;
};

std::string_view kind_name(TermKind kind);
// Parses "edges", "mutual", "nodeocov", ... (case-insensitive).
TermKind parse_kind(std::string_view s);

// Ordered term list; the order fixes the coefficient order everywhere
// downstream.
struct ModelSpec {
  std::string preset = "custom";
  std::vector<TermSpec> terms;

  std::size_t size() const { return terms.size(); }
  std::vector<std::string> term_names() const;
  std::optional<std::size_t> mutual_index() const;
  // Throws ValidationError unless Edges appears exactly once, Mutual at most
  // once, and attribute names are well formed.
  void validate() const;

  // rq1, rq2, h1, h2.
  static ModelSpec preset_model(std::string_view name);
  static const std::vector<std::string>& preset_names();

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

// A model with its covariates resolved against one attribute table.
class BoundModel {
 public:
  BoundModel(const ModelSpec& model, const AttributeTable& attrs);

  const ModelSpec& spec() const { return spec_; }
  std::size_t size() const { return spec_.size(); }
  std::size_t nodes() const { return nodes_; }
  std::optional<std::size_t> mutual_index() const { return mutual_; }
  // Node covariate of term k; empty for Edges and Mutual.
  const std::vector<double>& covariate(std::size_t k) const { return covariates_[k]; }

  // Change statistic of tie (i,j) with the Mutual component left at zero;
  // it depends only on node covariates.
  Eigen::VectorXd tie_features(std::size_t i, std::size_t j) const;
  void add_tie_features(std::size_t i, std::size_t j, double scale, Eigen::Ref<Eigen::VectorXd> out) const;

 private:
  ModelSpec spec_;
  std::size_t nodes_ = 0;
  std::optional<std::size_t> mutual_;
  std::vector<std::vector<double>> covariates_;  // per term; empty if none
};

Eigen::VectorXd sufficient_stats(const DirectedNetwork& network, const AttributeTable& attrs,
                                 const ModelSpec& model);
Eigen::VectorXd sufficient_stats(const DirectedNetwork& network, const BoundModel& model);

// g(y + (i,j)) - g(y - (i,j)).
Eigen::VectorXd change_stats(const DirectedNetwork& network, const AttributeTable& attrs,
                             const ModelSpec& model, std::size_t i, std::size_t j);
Eigen::VectorXd change_stats(const DirectedNetwork& network, const BoundModel& model,
                             std::size_t i, std::size_t j);

// Covariate contributions of the two directed ties of dyad {i,j}. The four
// dyad states have unnormalised log-weights
//   null: 0, i->j: theta.out, j->i: theta.in, mutual: theta.out + theta.in + theta[mutual].
struct DyadPredictors {
  Eigen::VectorXd out;  // tie i->j
  Eigen::VectorXd in;   // tie j->i
  std::optional<std::size_t> mutual_index;

  std::array<double, 4> log_weights(const Eigen::VectorXd& theta) const;
  // Sufficient-statistic contribution of a dyad state (0 null, 1 i->j,
  // 2 j->i, 3 mutual).
  Eigen::VectorXd state_stats(int state) const;
};

DyadPredictors dyad_predictors(const AttributeTable& attrs, const ModelSpec& model, std::size_t i,
                               std::size_t j);
DyadPredictors dyad_predictors(const BoundModel& model, std::size_t i, std::size_t j);

// 0 null, 1 i->j only, 2 j->i only, 3 both.
inline int dyad_state(const DirectedNetwork& network, std::size_t i, std::size_t j) {
  return (network.has_tie(i, j) ? 1 : 0) + (network.has_tie(j, i) ? 2 : 0);
}

}  // namespace ergmpool
