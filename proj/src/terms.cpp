#include "ergmpool/terms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ergmpool/error.hpp"

namespace ergmpool {

std::string_view kind_name(TermKind kind) {
  switch (kind) {
    case TermKind::Edges: return "edges";
    case TermKind::Mutual: return "mutual";
    case TermKind::NodeOCov: return "nodeocov";
    case TermKind::NodeICov: return "nodeicov";
    case TermKind::AbsDiff: return "absdiff";
    case TermKind::NodeMatch: return "nodematch";
  }
  return "?";
}

TermKind parse_kind(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto k : {TermKind::Edges, TermKind::Mutual, TermKind::NodeOCov, TermKind::NodeICov,
                 TermKind::AbsDiff, TermKind::NodeMatch})
    if (kind_name(k) == lower) return k;
  throw UnsupportedTermError("unsupported ERGM term '" + std::string(s) + "'");
}

std::string TermSpec::name() const {
  std::string n(kind_name(kind));
  if (!attr.empty()) n += "." + attr;
  return n;
}

std::vector<std::string> ModelSpec::term_names() const {
  std::vector<std::string> out;
  for (const auto& t : terms) out.push_back(t.name());
  return out;
}

std::optional<std::size_t> ModelSpec::mutual_index() const {
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (terms[k].kind == TermKind::Mutual) return k;
  return std::nullopt;
}

void ModelSpec::validate() const {
  std::size_t edges = 0, mutual = 0;
  for (const auto& t : terms) {
    const bool structural = t.kind == TermKind::Edges || t.kind == TermKind::Mutual;
    if (t.kind == TermKind::Edges) ++edges;
    if (t.kind == TermKind::Mutual) ++mutual;
    if (structural && !t.attr.empty())
      throw ValidationError("term '" + std::string(kind_name(t.kind)) + "' takes no attribute");
    if (!structural && !is_known_attribute(t.attr))
      throw ValidationError("term '" + std::string(kind_name(t.kind)) + "' has unknown attribute '" +
                            t.attr + "'");
  }
  if (edges != 1) throw ValidationError("model must contain edges exactly once");
  if (mutual > 1) throw ValidationError("model may contain mutual at most once");
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (std::size_t b = a + 1; b < terms.size(); ++b)
      if (terms[a] == terms[b]) throw ValidationError("duplicate term '" + terms[a].name() + "'");
}

ModelSpec ModelSpec::preset_model(std::string_view name) {
  using K = TermKind;
  ModelSpec m;
  m.preset = std::string(name);
  if (name == "rq1" || name == "rq2") {
    m.terms = {{K::Edges, ""},
               {K::Mutual, ""},
               {K::NodeOCov, "skills"},
               {K::NodeICov, "skills"},
               {K::NodeOCov, "perceived_skills"},
               {K::NodeICov, "perceived_skills"},
               {K::AbsDiff, "skills"}};
    if (name == "rq2") m.terms.push_back({K::NodeOCov, "female"});
  } else if (name == "h1") {
    m.terms = {{K::Edges, ""}, {K::Mutual, ""}, {K::NodeICov, "female"}};
  } else if (name == "h2") {
    m.terms = {{K::Edges, ""}, {K::Mutual, ""}, {K::NodeMatch, "female"}};
  } else {
    throw ValidationError("unknown model preset '" + std::string(name) + "'");
  }
  return m;
}

const std::vector<std::string>& ModelSpec::preset_names() {
  static const std::vector<std::string> names{"rq1", "rq2", "h1", "h2"};
  return names;
}

BoundModel::BoundModel(const ModelSpec& model, const AttributeTable& attrs)
    : spec_(model), nodes_(attrs.size()), mutual_(model.mutual_index()) {
  spec_.validate();
  covariates_.resize(spec_.size());
  for (std::size_t k = 0; k < spec_.size(); ++k)
    if (!spec_.terms[k].attr.empty()) covariates_[k] = attrs.complete_column(spec_.terms[k].attr);
}

void BoundModel::add_tie_features(std::size_t i, std::size_t j, double scale,
                                  Eigen::Ref<Eigen::VectorXd> out) const {
  for (std::size_t k = 0; k < spec_.size(); ++k) {
    const auto& x = covariates_[k];
    double v = 0.0;
    switch (spec_.terms[k].kind) {
      case TermKind::Edges: v = 1.0; break;
      case TermKind::Mutual: v = 0.0; break;
      case TermKind::NodeOCov: v = x[i]; break;
      case TermKind::NodeICov: v = x[j]; break;
      case TermKind::AbsDiff: v = std::abs(x[i] - x[j]); break;
      case TermKind::NodeMatch: v = x[i] == x[j] ? 1.0 : 0.0; break;
    }
    out[static_cast<Eigen::Index>(k)] += scale * v;
  }
}

Eigen::VectorXd BoundModel::tie_features(std::size_t i, std::size_t j) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
  add_tie_features(i, j, 1.0, f);
  return f;
}

namespace {
void check_network(const DirectedNetwork& network, const BoundModel& model) {
  if (network.size() != model.nodes())
    throw ValidationError("network " + network.id() + ": attribute table has " +
                          std::to_string(model.nodes()) + " rows for " +
                          std::to_string(network.size()) + " nodes");
}
}  // namespace

Eigen::VectorXd sufficient_stats(const DirectedNetwork& network, const BoundModel& model) {
  check_network(network, model);
  const auto ties = network.ties();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.size()));
  for (std::size_t k = 0; k < model.size(); ++k) {
    const auto& x = model.covariate(k);
    double s = 0.0;
    switch (model.spec().terms[k].kind) {
      case TermKind::Edges:
        s = static_cast<double>(ties.size());
        break;
      case TermKind::Mutual:
        for (auto [i, j] : ties)
          if (i < j && network.has_tie(j, i)) s += 1.0;
        break;
      case TermKind::NodeOCov:
        for (auto [i, j] : ties) s += x[i];
        break;
      case TermKind::NodeICov:
        for (auto [i, j] : ties) s += x[j];
        break;
      case TermKind::AbsDiff:
        for (auto [i, j] : ties) s += std::abs(x[i] - x[j]);
        break;
      case TermKind::NodeMatch:
        for (auto [i, j] : ties) s += x[i] == x[j] ? 1.0 : 0.0;
        break;
    }
    g[static_cast<Eigen::Index>(k)] = s;
  }
  return g;
}

Eigen::VectorXd sufficient_stats(const DirectedNetwork& network, const AttributeTable& attrs,
                                 const ModelSpec& model) {
  return sufficient_stats(network, BoundModel(model, attrs));
}

Eigen::VectorXd change_stats(const DirectedNetwork& network, const BoundModel& model,
                             std::size_t i, std::size_t j) {
  check_network(network, model);
  if (i == j) throw ValidationError("change statistic requested for a self-loop");
  if (i >= network.size() || j >= network.size())
    throw ValidationError("change statistic node index out of range");
  Eigen::VectorXd d = model.tie_features(i, j);
  if (model.mutual_index() && network.has_tie(j, i))
    d[static_cast<Eigen::Index>(*model.mutual_index())] = 1.0;
  return d;
}

Eigen::VectorXd change_stats(const DirectedNetwork& network, const AttributeTable& attrs,
                             const ModelSpec& model, std::size_t i, std::size_t j) {
  return change_stats(network, BoundModel(model, attrs), i, j);
}

std::array<double, 4> DyadPredictors::log_weights(const Eigen::VectorXd& theta) const {
  const double eta_out = theta.dot(out);
  const double eta_in = theta.dot(in);
  const double m = mutual_index ? theta[static_cast<Eigen::Index>(*mutual_index)] : 0.0;
  return {0.0, eta_out, eta_in, eta_out + eta_in + m};
}

Eigen::VectorXd DyadPredictors::state_stats(int state) const {
  Eigen::VectorXd s = Eigen::VectorXd::Zero(out.size());
  if (state & 1) s += out;
  if (state & 2) s += in;
  if (state == 3 && mutual_index) s[static_cast<Eigen::Index>(*mutual_index)] += 1.0;
  return s;
}

DyadPredictors dyad_predictors(const BoundModel& model, std::size_t i, std::size_t j) {
  if (i == j) throw ValidationError("dyad predictors requested for a self-loop");
  if (i >= model.nodes() || j >= model.nodes())
    throw ValidationError("dyad predictor node index out of range");
  return {model.tie_features(i, j), model.tie_features(j, i), model.mutual_index()};
}

DyadPredictors dyad_predictors(const AttributeTable& attrs, const ModelSpec& model, std::size_t i,
                               std::size_t j) {
  return dyad_predictors(BoundModel(model, attrs), i, j);
}

}  // namespace ergmpool
