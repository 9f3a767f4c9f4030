#include "ergmpool/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ergmpool/error.hpp"
#include "ergmpool/pipeline.hpp"
#include "ergmpool/rng.hpp"

namespace ergmpool {

using nlohmann::json;

namespace {

std::string padded(const std::string& prefix, std::size_t i, std::size_t count) {
  const std::size_t digits = std::max<std::size_t>(count < 2 ? 1 : std::to_string(count).size(), 2);
  std::string s = std::to_string(i + 1);
  return prefix + std::string(digits > s.size() ? digits - s.size() : 0, '0') + s;
}

}  // namespace

std::vector<NetworkData> simulate_batch(const SyntheticBatchConfig& config) {
  config.model.validate();
  if (static_cast<std::size_t>(config.theta.size()) != config.model.size())
    throw ValidationError("theta has " + std::to_string(config.theta.size()) + " entries but model '" +
                          config.model.preset + "' has " + std::to_string(config.model.size()) +
                          " terms");
  if (config.networks == 0) throw ValidationError("simulate needs at least one network");
  if (config.nodes < 2) throw ValidationError("simulated networks need at least two nodes");
  if (config.countries.empty()) throw ValidationError("simulate needs at least one country");

  std::vector<std::string> node_ids;
  for (std::size_t v = 0; v < config.nodes; ++v) node_ids.push_back(padded("n", v, config.nodes));

  std::vector<NetworkData> batch;
  for (std::size_t i = 0; i < config.networks; ++i) {
    const auto id = padded("net", i, std::max<std::size_t>(config.networks, 100));
    auto attrs =
        generate_attributes(config.nodes, stream_seed(config.seed, {hash_string("attributes"), i}),
                            config.attributes);
    SimConfig sim;
    sim.n = config.nodes;
    sim.model = config.model;
    sim.theta = config.theta;
    sim.seed = stream_seed(config.seed, {hash_string("network"), i});
    sim.outdegree_cap = config.outdegree_cap;
    sim.metropolis = config.metropolis;
    sim.metropolis.sample_count = 1;
    DirectedNetwork drawn =
        config.outdegree_cap ? sample_metropolis(sim, attrs).front() : sample_exact(sim, attrs);
    DirectedNetwork net(id, node_ids, config.countries[i % config.countries.size()], "1");
    for (const auto& [a, b] : drawn.ties()) net.add_tie(a, b);
    batch.push_back({std::move(net), std::move(attrs), {}});
  }
  return batch;
}

SyntheticBatchConfig parse_sim_config(const json& doc) {
  if (!doc.is_object()) throw ValidationError("simulation config must be an object");
  static const std::vector<std::string> keys{"networks", "nodes",         "model",   "theta",   "seed",
                                             "countries", "outdegree_cap", "burn_in", "thinning"};
  for (const auto& [k, v] : doc.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw ValidationError("simulation config: unknown key '" + k + "'");
  SyntheticBatchConfig c;
  try {
    if (doc.contains("networks")) c.networks = doc.at("networks").get<std::size_t>();
    if (doc.contains("nodes")) c.nodes = doc.at("nodes").get<std::size_t>();
    if (!doc.contains("model")) throw ValidationError("simulation config: 'model' is required");
    c.model = parse_model_entry(doc.at("model"), "model");
    if (doc.contains("theta")) {
      const auto v = doc.at("theta").get<std::vector<double>>();
      c.theta = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    } else {
      c.theta = default_theta(c.model.preset);
    }
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("countries")) c.countries = doc.at("countries").get<std::vector<std::string>>();
    if (doc.contains("outdegree_cap") && !doc.at("outdegree_cap").is_null())
      c.outdegree_cap = doc.at("outdegree_cap").get<std::size_t>();
    if (doc.contains("burn_in")) c.metropolis.burn_in = doc.at("burn_in").get<std::size_t>();
    if (doc.contains("thinning")) c.metropolis.thinning = doc.at("thinning").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("simulation config: ") + e.what());
  }
  for (const auto& key : {"networks", "nodes", "seed", "outdegree_cap", "burn_in", "thinning"})
    if (doc.contains(key) && doc.at(key).is_number_integer() && doc.at(key).get<long long>() < 0)
      throw ValidationError(std::string("simulation config: '") + key + "' must be a non-negative integer");
  return c;
}

Eigen::VectorXd default_theta(const std::string& preset) {
  std::vector<double> v;
  if (preset == "rq1")
    v = {-4.12, 2.84, -0.952, 0.472, 0.119, -0.0015, -0.424};
  else if (preset == "rq2")
    v = {-4.12, 2.84, -0.952, 0.472, 0.119, -0.0015, -0.424, 0.181};
  else if (preset == "h1")
    v = {-3.31, 2.77, 0.0681};
  else if (preset == "h2")
    v = {-3.93, 2.51, 1.05};
  else
    throw ValidationError("no default theta for model '" + preset + "'; give theta explicitly");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

RecoveryReport recovery_study(const RecoveryOptions& options) {
  const auto model = ModelSpec::preset_model(options.preset);
  const Eigen::VectorXd theta = options.theta ? *options.theta : default_theta(options.preset);
  if (static_cast<std::size_t>(theta.size()) != model.size())
    throw ValidationError("theta has " + std::to_string(theta.size()) + " entries but preset '" +
                          options.preset + "' has " + std::to_string(model.size()) + " terms");
  if (options.replications == 0) throw ValidationError("recovery needs at least one replication");

  RecoveryReport report;
  report.preset = options.preset;
  report.networks = options.networks;
  report.nodes = options.nodes;
  report.replications = options.replications;
  const auto names = model.term_names();
  std::vector<double> sum(names.size()), sq(names.size()), covered(names.size()), lo(names.size()),
      hi(names.size());
  if (options.networks < 5)
    report.warnings.push_back("small pool: " + std::to_string(options.networks) +
                              " networks per replication; intervals lean on the priors");

  for (std::size_t rep = 0; rep < options.replications; ++rep) {
    SyntheticBatchConfig sim;
    sim.networks = options.networks;
    sim.nodes = options.nodes;
    sim.model = model;
    sim.theta = theta;
    sim.seed = stream_seed(options.seed, {hash_string("recovery"), rep});
    auto fits = fit_batch({simulate_batch(sim)}, model, Estimator::Exact, options.workers);
    const auto result = pool_model("seeking", model, std::move(fits), {}, options.pool,
                                   stream_seed(options.seed, {hash_string("pool"), rep}),
                                   options.workers);
    report.excluded += result.filtered.exclusions.size();
    for (std::size_t k = 0; k < names.size(); ++k) {
      const auto& s = result.pooled[k].pooled;
      const double t = theta[static_cast<Eigen::Index>(k)];
      sum[k] += s.mean;
      sq[k] += (s.mean - t) * (s.mean - t);
      covered[k] += s.lower <= t && t <= s.upper;
      lo[k] += s.lower;
      hi[k] += s.upper;
      for (const auto& w : result.pooled[k].warnings)
        report.warnings.push_back("replication " + std::to_string(rep + 1) + ", " + names[k] + ": " + w);
    }
  }
  const double r = static_cast<double>(options.replications);
  for (std::size_t k = 0; k < names.size(); ++k) {
    RecoveryTerm t;
    t.term = names[k];
    t.theta_true = theta[static_cast<Eigen::Index>(k)];
    t.mean_estimate = sum[k] / r;
    t.bias = t.mean_estimate - t.theta_true;
    t.rmse = std::sqrt(sq[k] / r);
    t.coverage = covered[k] / r;
    t.mean_lower = lo[k] / r;
    t.mean_upper = hi[k] / r;
    report.terms.push_back(t);
  }
  return report;
}

std::string format_recovery(const RecoveryReport& report) {
  std::ostringstream out;
  out << "recovery " << report.preset << ": " << report.networks << " networks of " << report.nodes
      << " nodes, " << report.replications << " replication(s), " << report.excluded
      << " exclusion(s)\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %10s %10s %10s %10s %9s\n", "term", "true", "estimate",
                "bias", "rmse", "coverage");
  out << line;
  for (const auto& t : report.terms) {
    std::snprintf(line, sizeof line, "%-28s %10.4f %10.4f %10.4f %10.4f %9.2f\n", t.term.c_str(),
                  t.theta_true, t.mean_estimate, t.bias, t.rmse, t.coverage);
    out << line;
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

}  // namespace ergmpool
