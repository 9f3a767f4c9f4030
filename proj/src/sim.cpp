#include "ergmpool/sim.hpp"

#include <algorithm>
#include <cmath>

#include "ergmpool/error.hpp"
#include "ergmpool/fit.hpp"
#include "ergmpool/rng.hpp"

namespace ergmpool {
namespace {

void validate(const SimConfig& config, const AttributeTable& attrs) {
  if (config.n < 2) throw ValidationError("simulation requires n >= 2");
  if (attrs.size() != config.n)
    throw ValidationError("attribute table has " + std::to_string(attrs.size()) + " rows for n = " +
                          std::to_string(config.n));
  if (static_cast<std::size_t>(config.theta.size()) != config.model.size())
    throw ValidationError("theta length does not match the model term count");
  if (!config.theta.allFinite()) throw ValidationError("theta must be finite");
}

// Per-dyad cumulative state probabilities for a fixed theta.
class DyadSampler {
 public:
  DyadSampler(const BoundModel& model, const Eigen::VectorXd& theta) : n_(model.nodes()) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const auto p = dyad_state_probabilities(dyad_predictors(model, i, j), theta);
        cumulative_.push_back({p[0], p[0] + p[1], p[0] + p[1] + p[2]});
      }
  }

  DirectedNetwork draw(Rng& rng, const std::string& id) const {
    DirectedNetwork net = DirectedNetwork::empty(n_, id);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j, ++k) {
        const double u = uniform01(rng);
        const auto& c = cumulative_[k];
        const int state = u < c[0] ? 0 : u < c[1] ? 1 : u < c[2] ? 2 : 3;
        if (state & 1) net.add_tie(i, j);
        if (state & 2) net.add_tie(j, i);
      }
    return net;
  }

 private:
  std::size_t n_;
  std::vector<std::array<double, 3>> cumulative_;
};

}  // namespace

DirectedNetwork sample_exact(const SimConfig& config, const AttributeTable& attrs) {
  validate(config, attrs);
  if (config.outdegree_cap)
    throw UnsupportedConstraintError("exact sampling cannot honour an out-degree cap; use Metropolis");
  const BoundModel model(config.model, attrs);
  Rng rng(stream_seed(config.seed, {0xE7u}));
  return DyadSampler(model, config.theta).draw(rng, "sim");
}

std::vector<DirectedNetwork> sample_metropolis(const SimConfig& config, const AttributeTable& attrs) {
  validate(config, attrs);
  const auto& mo = config.metropolis;
  if (mo.sample_count == 0) throw ValidationError("sample_count must be positive");
  const std::size_t n = config.n;
  const std::size_t burn_in = mo.burn_in.value_or(10 * n * n);
  const std::size_t thinning = std::max<std::size_t>(1, mo.thinning.value_or(n * n));
  const BoundModel model(config.model, attrs);

  Rng rng(stream_seed(config.seed, {0x3E7u}));
  std::uniform_int_distribution<std::size_t> pick_source(0, n - 1), pick_other(0, n - 2);
  DirectedNetwork net = DirectedNetwork::empty(n, "sim");
  std::vector<std::size_t> out_degree(n, 0);
  Eigen::VectorXd delta(static_cast<Eigen::Index>(model.size()));

  auto step = [&] {
    const std::size_t i = pick_source(rng);
    std::size_t j = pick_other(rng);
    if (j >= i) ++j;
    const bool present = net.has_tie(i, j);
    if (!present && config.outdegree_cap && out_degree[i] >= *config.outdegree_cap) return;
    delta = change_stats(net, model, i, j);
    const double log_ratio = (present ? -1.0 : 1.0) * config.theta.dot(delta);
    if (log_ratio >= 0.0 || std::log(uniform01(rng)) < log_ratio) {
      net.toggle_tie(i, j);
      if (present)
        --out_degree[i];
      else
        ++out_degree[i];
    }
  };

  for (std::size_t s = 0; s < burn_in; ++s) step();
  std::vector<DirectedNetwork> out;
  out.reserve(mo.sample_count);
  for (std::size_t k = 0; k < mo.sample_count; ++k) {
    for (std::size_t s = 0; s < thinning; ++s) step();
    out.push_back(net);
  }
  return out;
}

AttributeTable generate_attributes(std::size_t n, std::uint64_t seed, const AttributeGenSpec& spec) {
  Rng rng(stream_seed(seed, {0xA77u}));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto truncated = [&](double mean, double sd) {
    while (true) {
      const double v = mean + sd * normal(rng);
      if (v >= 0.0 && v <= 1.0) return v;
    }
  };
  AttributeTable t;
  t.rows.resize(n);
  for (auto& row : t.rows) {
    row.female = uniform01(rng) < spec.female_probability ? 1 : 0;
    row.skills = truncated(spec.skills_mean, spec.skills_sd);
    row.perceived_skills = truncated(spec.perceived_mean, spec.perceived_sd);
  }
  return t;
}

std::vector<GofRecord> gof(const DirectedNetwork& network, const AttributeTable& attrs,
                           const ModelSpec& model, const Eigen::VectorXd& theta,
                           std::uint64_t seed, std::size_t replicates) {
  if (!theta.allFinite()) throw ValidationError("gof requires a finite theta");
  if (replicates == 0) throw ValidationError("gof requires at least one replicate");
  const BoundModel bound(model, attrs);
  if (static_cast<std::size_t>(theta.size()) != bound.size())
    throw ValidationError("theta length does not match the model term count");
  const Eigen::VectorXd observed = sufficient_stats(network, bound);
  const DyadSampler sampler(bound, theta);
  const auto p = static_cast<Eigen::Index>(bound.size());
  Eigen::MatrixXd sims(static_cast<Eigen::Index>(replicates), p);
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng rng(stream_seed(seed, {0x60Fu, r}));
    sims.row(static_cast<Eigen::Index>(r)) =
        sufficient_stats(sampler.draw(rng, network.id()), bound).transpose();
  }
  std::vector<GofRecord> out;
  const auto names = model.term_names();
  const double count = static_cast<double>(replicates);
  for (Eigen::Index k = 0; k < p; ++k) {
    GofRecord rec;
    rec.term = names[static_cast<std::size_t>(k)];
    rec.observed = observed[k];
    const Eigen::VectorXd col = sims.col(k);
    rec.simulated_mean = col.mean();
    rec.simulated_sd =
        replicates > 1 ? std::sqrt((col.array() - rec.simulated_mean).square().sum() / (count - 1)) : 0.0;
    double below = 0, equal = 0;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (col[r] < rec.observed) ++below;
      else if (col[r] == rec.observed) ++equal;
    }
    rec.quantile = (below + 0.5 * equal) / count;
    std::vector<double> sorted(col.data(), col.data() + col.size());
    std::sort(sorted.begin(), sorted.end());
    auto q = [&](double prob) {
      const auto idx = static_cast<std::size_t>(std::floor(prob * (count - 1)));
      return sorted[idx];
    };
    rec.lower_1 = q(0.01);
    rec.upper_99 = q(0.99);
    out.push_back(rec);
  }
  return out;
}

}  // namespace ergmpool
