#include "ergmpool/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "ergmpool/error.hpp"
#include "ergmpool/impute.hpp"
#include "ergmpool/parallel.hpp"
#include "ergmpool/report.hpp"
#include "ergmpool/rng.hpp"
#include "ergmpool/version.hpp"

namespace ergmpool {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string>& network_types() {
  static const std::vector<std::string> types{"seeking", "giving"};
  return types;
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ValidationError(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& obj, const std::string& key, const std::string& where) {
  if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
    if (obj.contains(key) && !(obj.at(key).is_number_integer() && obj.at(key).get<long long>() >= 0))
      throw ValidationError(where + ": '" + key + "' must be a non-negative integer");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": '" + key + "' is missing or has the wrong type");
  }
}

template <class T>
void get_opt(const json& obj, const std::string& key, const std::string& where, T& out) {
  if (obj.contains(key)) out = get<T>(obj, key, where);
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

ModelSpec parse_model_entry(const json& m, const std::string& where) {
  if (m.is_string()) {
    const auto name = m.get<std::string>();
    const auto& presets = ModelSpec::preset_names();
    if (std::find(presets.begin(), presets.end(), name) == presets.end())
      throw ValidationError(where + ": unknown preset '" + name + "'");
    return ModelSpec::preset_model(name);
  }
  check_keys(m, {"model", "name", "terms"}, where);
  if (get<std::string>(m, "model", where) != "custom")
    throw ValidationError(where + ": object models must have \"model\": \"custom\"");
  ModelSpec spec;
  spec.preset = "custom";
  get_opt(m, "name", where, spec.preset);
  if (spec.preset.empty() || spec.preset.find_first_of(",/\\ \t\n\"") != std::string::npos)
    throw ValidationError(where + ": invalid model name '" + spec.preset + "'");
  const auto& terms = m.contains("terms") ? m.at("terms") : json();
  if (!terms.is_array() || terms.empty())
    throw ValidationError(where + ": 'terms' must be a non-empty array");
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tw = where + ".terms[" + std::to_string(t) + "]";
    check_keys(terms[t], {"kind", "attr"}, tw);
    TermSpec term;
    term.kind = parse_kind(get<std::string>(terms[t], "kind", tw));
    get_opt(terms[t], "attr", tw, term.attr);
    if (term.kind == TermKind::NodeMatch && !is_categorical_attribute(term.attr))
      throw UnsupportedTermError(tw + ": nodematch needs a categorical attribute, got '" + term.attr +
                                 "'");
    spec.terms.push_back(term);
  }
  try {
    spec.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return spec;
}

namespace {

std::string model_name(const ModelSpec& m) { return m.preset; }

FitResult combine_imputations(const std::vector<FitResult>& fits) {
  if (fits.size() == 1) return fits.front();
  const double m = static_cast<double>(fits.size());
  FitResult out = fits.front();
  const auto p = out.theta.size();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd within = Eigen::MatrixXd::Zero(p, p);
  double ll = 0.0;
  for (const auto& f : fits) {
    mean += f.theta;
    within += f.covariance;
    ll += f.log_likelihood;
    out.converged = out.converged && f.converged;
    out.separation_flag = out.separation_flag || f.separation_flag;
    out.newton_iterations = std::max(out.newton_iterations, f.newton_iterations);
  }
  mean /= m;
  within /= m;
  Eigen::MatrixXd between = Eigen::MatrixXd::Zero(p, p);
  for (const auto& f : fits) {
    const Eigen::VectorXd d = f.theta - mean;
    between += d * d.transpose();
  }
  between /= (m - 1.0);
  out.theta = mean;
  out.covariance = within + (1.0 + 1.0 / m) * between;
  out.standard_errors = out.covariance.diagonal().cwiseSqrt();
  out.log_likelihood = ll / m;
  return out;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

json interval_json(const IntervalSummary& s) {
  return {{"mean", s.mean}, {"sd", s.sd}, {"median", s.median}, {"ci", {s.lower, s.upper}}};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << content;
}

}  // namespace

RunManifest parse_manifest(const json& doc, const fs::path& base_dir) {
  check_keys(doc, {"seed", "output_dir", "networks", "models", "estimator", "filter", "pool",
                   "imputation", "draws"},
             "manifest");
  RunManifest m;
  get_opt(doc, "seed", "manifest", m.seed);
  if (doc.contains("output_dir"))
    m.output_dir = resolve(base_dir, get<std::string>(doc, "output_dir", "manifest"));
  else
    m.output_dir = base_dir / m.output_dir;

  if (!doc.contains("networks")) throw ValidationError("manifest: 'networks' is required");
  const auto& nets = doc.at("networks");
  check_keys(nets, {"seeking", "giving"}, "networks");
  for (const auto& type : network_types()) {
    if (!nets.contains(type)) continue;
    const auto& n = nets.at(type);
    const std::string where = "networks." + type;
    check_keys(n, {"edges", "attributes", "ratings"}, where);
    InputFiles files;
    files.edges = resolve(base_dir, get<std::string>(n, "edges", where));
    files.attributes = resolve(base_dir, get<std::string>(n, "attributes", where));
    if (n.contains("ratings")) files.ratings = resolve(base_dir, get<std::string>(n, "ratings", where));
    m.inputs.emplace_back(type, files);
  }

  if (!doc.contains("models") || !doc.at("models").is_array())
    throw ValidationError("manifest: 'models' must be an array");
  for (std::size_t i = 0; i < doc.at("models").size(); ++i)
    m.models.push_back(parse_model_entry(doc.at("models")[i], "models[" + std::to_string(i) + "]"));

  if (doc.contains("estimator")) {
    const auto e = get<std::string>(doc, "estimator", "manifest");
    if (e == "exact")
      m.estimator = Estimator::Exact;
    else if (e == "mple")
      m.estimator = Estimator::Mple;
    else
      throw ValidationError("manifest: estimator must be \"exact\" or \"mple\"");
  }
  if (doc.contains("filter")) {
    const auto& f = doc.at("filter");
    check_keys(f, {"max_se", "require_converged", "exclude_separated"}, "filter");
    get_opt(f, "max_se", "filter", m.filter.max_se);
    get_opt(f, "require_converged", "filter", m.filter.require_converged);
    get_opt(f, "exclude_separated", "filter", m.filter.exclude_separated);
  }
  if (doc.contains("pool")) {
    const auto& p = doc.at("pool");
    check_keys(p, {"chains", "iterations", "warmup", "tau_scale", "tau_country_scale", "mu_sd"},
               "pool");
    get_opt(p, "chains", "pool", m.pool.chains);
    get_opt(p, "iterations", "pool", m.pool.iterations);
    get_opt(p, "warmup", "pool", m.pool.warmup);
    get_opt(p, "tau_scale", "pool", m.pool.tau_scale);
    get_opt(p, "tau_country_scale", "pool", m.pool.tau_country_scale);
    get_opt(p, "mu_sd", "pool", m.pool.mu_sd);
  }
  if (doc.contains("imputation")) {
    const auto& im = doc.at("imputation");
    check_keys(im, {"iterations", "imputations"}, "imputation");
    get_opt(im, "iterations", "imputation", m.imputation_iterations);
    get_opt(im, "imputations", "imputation", m.imputations);
  }
  get_opt(doc, "draws", "manifest", m.write_draws);
  return m;
}

RunManifest load_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open manifest " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return parse_manifest(doc, file.parent_path());
}

void validate_manifest(const RunManifest& m) {
  if (m.inputs.empty()) throw ValidationError("manifest names no networks");
  if (m.models.empty()) throw ValidationError("manifest names no models");
  std::set<std::string> names;
  for (const auto& model : m.models) {
    model.validate();
    if (!names.insert(model_name(model)).second)
      throw ValidationError("model '" + model_name(model) + "' listed twice");
  }
  for (const auto& [type, files] : m.inputs) {
    std::vector<fs::path> paths{files.edges, files.attributes};
    if (files.ratings) paths.push_back(*files.ratings);
    for (const auto& p : paths)
      if (!fs::is_regular_file(p))
        throw ValidationError("networks." + type + ": file not found: " + p.string());
  }
  if (m.pool.chains < 2) throw ValidationError("pool.chains must be at least 2");
  if (m.pool.warmup >= m.pool.iterations)
    throw ValidationError("pool.warmup must be below pool.iterations");
  if (m.pool.iterations - m.pool.warmup < 4)
    throw ValidationError("pool needs at least 4 post-warmup iterations");
  if (!(m.pool.tau_scale > 0) || !(m.pool.tau_country_scale > 0) || !(m.pool.mu_sd > 0))
    throw ValidationError("pool prior scales must be positive");
  if (!(m.filter.max_se > 0)) throw ValidationError("filter.max_se must be positive");
  if (m.imputations < 1) throw ValidationError("imputation.imputations must be at least 1");
  if (m.imputation_iterations < 1) throw ValidationError("imputation.iterations must be at least 1");
}

PreparedBatch prepare_batch(const std::string& network_type, std::vector<NetworkData> batch,
                            std::size_t imputations, int iterations, std::uint64_t seed) {
  PreparedBatch out;
  out.network_type = network_type;
  const std::string tag = "[" + network_type + "] ";

  for (auto& d : batch) {
    const auto perceived = derive_perceived_skills(d.network, d.ratings);
    for (std::size_t i = 0; i < d.attributes.size(); ++i) {
      auto& row = d.attributes.rows[i];
      if (!row.skills) row.skills = derive_composite_skills(row.skill_items);
      if (!row.perceived_skills) row.perceived_skills = perceived[i];
    }
  }

  // Columns pooled over the batch; degrees are always observed.
  std::vector<ImputationColumn> cols{{"female", ColumnKind::Binary, {}, {}, {}},
                                     {"skills", ColumnKind::Continuous, {}, 0.0, 1.0},
                                     {"perceived_skills", ColumnKind::Continuous, {}, 0.0, 1.0},
                                     {"out_degree", ColumnKind::Continuous, {}, {}, {}},
                                     {"in_degree", ColumnKind::Continuous, {}, {}, {}}};
  for (const auto& d : batch)
    for (std::size_t i = 0; i < d.attributes.size(); ++i) {
      const auto& row = d.attributes.rows[i];
      cols[0].values.push_back(row.female ? std::optional<double>(*row.female) : std::nullopt);
      cols[1].values.push_back(row.skills);
      cols[2].values.push_back(row.perceived_skills);
      cols[3].values.push_back(static_cast<double>(d.network.out_degree(i)));
      cols[4].values.push_back(static_cast<double>(d.network.in_degree(i)));
    }

  std::vector<ImputationColumn> table;
  std::vector<std::size_t> source;
  bool any_missing = false;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto missing = static_cast<std::size_t>(
        std::count(cols[c].values.begin(), cols[c].values.end(), std::nullopt));
    if (c < 3)
      out.log.push_back(tag + "missing " + cols[c].name + ": " + std::to_string(missing) + " of " +
                        std::to_string(cols[c].values.size()));
    if (missing == cols[c].values.size() && !cols[c].values.empty()) {
      out.log.push_back(tag + cols[c].name + " has no observed values; left missing");
      continue;
    }
    any_missing = any_missing || missing > 0;
    table.push_back(cols[c]);
    source.push_back(c);
  }

  for (std::size_t r = 0; r < imputations; ++r) {
    auto copy = batch;
    if (any_missing) {
      const auto s = stream_seed(seed, {hash_string(network_type), r});
      out.log.push_back(tag + "imputation " + std::to_string(r + 1) + " seed " + std::to_string(s));
      const auto filled = impute_chained(table, {iterations, s});
      for (std::size_t t = 0; t < filled.size(); ++t) {
        const auto c = source[t];
        if (c > 2) continue;
        std::size_t k = 0;
        for (auto& d : copy)
          for (auto& row : d.attributes.rows) {
            const double v = *filled[t].values[k++];
            if (c == 0)
              row.female = static_cast<int>(std::lround(v));
            else if (c == 1)
              row.skills = v;
            else
              row.perceived_skills = v;
          }
      }
    }
    out.imputations.push_back(std::move(copy));
  }
  return out;
}

ModelFits fit_batch(const std::vector<std::vector<NetworkData>>& imputations, const ModelSpec& model,
                    Estimator estimator, std::size_t workers) {
  if (imputations.empty()) throw ValidationError("fit_batch needs at least one imputation");
  const auto& first = imputations.front();
  std::vector<std::optional<FitResult>> fits(first.size());
  std::vector<std::string> failures(first.size());
  parallel_for(first.size(), workers, [&](std::size_t i) {
    std::vector<FitResult> per;
    try {
      for (const auto& batch : imputations) {
        const auto& d = batch[i];
        per.push_back(estimator == Estimator::Exact ? fit_exact(d.network, d.attributes, model)
                                                    : fit_mple(d.network, d.attributes, model));
      }
      fits[i] = combine_imputations(per);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  ModelFits out;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (fits[i])
      out.fits.push_back(std::move(*fits[i]));
    else
      out.failures.push_back({first[i].network.id(), "fit failed: " + failures[i]});
  }
  return out;
}

ModelResult pool_model(const std::string& network_type, const ModelSpec& model, ModelFits fits,
                       const FilterOptions& filter, const PoolConfig& config, std::uint64_t seed,
                       std::size_t workers) {
  ModelResult r;
  r.network_type = network_type;
  r.model = model;
  r.fits = std::move(fits);
  const std::string tag = network_type + "/" + model_name(model);
  const std::size_t failed = r.fits.failures.size();
  try {
    r.filtered = filter_fits(r.fits.fits, filter);
  } catch (const EmptyPoolError& e) {
    throw EmptyPoolError(tag + ": " + e.what() + ", " + std::to_string(failed) + " fits failed");
  }
  r.filtered.networks_in += failed;
  for (const auto& f : r.fits.failures) r.filtered.exclusions.push_back({f.network_id, f.reason});
  std::sort(r.filtered.exclusions.begin(), r.filtered.exclusions.end(),
            [](const Exclusion& a, const Exclusion& b) { return a.network_id < b.network_id; });

  r.pool_seed = stream_seed(seed, {hash_string(network_type), hash_string(model_name(model))});
  PoolConfig cfg = config;
  cfg.seed = r.pool_seed;
  cfg.workers = 1;
  r.pooled.resize(r.filtered.terms.size());
  parallel_for(r.filtered.terms.size(), workers,
               [&](std::size_t k) { r.pooled[k] = pool(r.filtered.observations[k], cfg); });
  return r;
}

PipelineResult run_pipeline(const RunManifest& manifest, std::size_t workers) {
  PipelineResult out;
  out.log.push_back(std::string("ergmpool ") + kVersion);
  out.log.push_back("seed " + std::to_string(manifest.seed));
  out.log.push_back(std::string("estimator ") +
                    (manifest.estimator == Estimator::Exact ? "exact" : "mple"));
  out.log.push_back("imputations " + std::to_string(manifest.imputations) + ", chained-equation sweeps " +
                    std::to_string(manifest.imputation_iterations));
  const auto& p = manifest.pool;
  out.log.push_back("pool chains " + std::to_string(p.chains) + " iterations " +
                    std::to_string(p.iterations) + " warmup " + std::to_string(p.warmup) +
                    " tau_scale " + format_number(p.tau_scale) + " tau_country_scale " +
                    format_number(p.tau_country_scale) + " mu_sd " + format_number(p.mu_sd));
  out.log.push_back("filter max_se " + format_number(manifest.filter.max_se) +
                    " require_converged " + std::to_string(manifest.filter.require_converged) +
                    " exclude_separated " + std::to_string(manifest.filter.exclude_separated));
  for (const auto& m : manifest.models)
    out.log.push_back("model " + model_name(m) + " terms " + join(m.term_names(), ", "));

  for (const auto& [type, files] : manifest.inputs) {
    auto batch = load_batch(files.edges, files.attributes, files.ratings);
    if (batch.empty()) throw ValidationError("networks." + type + ": no networks in " +
                                             files.attributes.string());
    out.log.push_back("[" + type + "] " + std::to_string(batch.size()) + " networks from " +
                      files.edges.filename().string() + ", " + files.attributes.filename().string() +
                      (files.ratings ? ", " + files.ratings->filename().string() : std::string()));
    auto prepared =
        prepare_batch(type, std::move(batch), manifest.imputations, manifest.imputation_iterations,
                      stream_seed(manifest.seed, {hash_string("impute")}));
    out.log.insert(out.log.end(), prepared.log.begin(), prepared.log.end());

    const auto& data = prepared.imputations.front();
    for (const auto& model : manifest.models)
      for (const auto& term : model.terms) {
        if (term.attr.empty()) continue;
        for (const auto& d : data) {
          const auto col = d.attributes.column(term.attr);
          if (std::count(col.begin(), col.end(), std::nullopt) > 0)
            throw ValidationError("networks." + type + ": covariate '" + term.attr +
                                  "' has no observed values but model '" + model_name(model) +
                                  "' uses it");
        }
      }

    for (const auto& model : manifest.models) {
      auto fits = fit_batch(prepared.imputations, model, manifest.estimator, workers);
      auto result = pool_model(type, model, std::move(fits), manifest.filter, manifest.pool,
                               manifest.seed, workers);
      const std::string tag = "[" + type + "/" + model_name(model) + "] ";
      out.log.push_back(tag + "pool seed " + std::to_string(result.pool_seed));
      for (const auto& e : result.filtered.exclusions)
        out.log.push_back(tag + "excluded " + e.network_id + ": " + e.reason);
      const auto pooled_n = result.filtered.observations.front().size();
      out.log.push_back(tag + std::to_string(result.filtered.networks_in) + " networks in, " +
                        std::to_string(pooled_n) + " pooled, " +
                        std::to_string(result.filtered.exclusions.size()) + " excluded");
      if (pooled_n < 5)
        out.log.push_back(tag + "note: only " + std::to_string(pooled_n) +
                          " networks pooled; intervals lean on the priors");
      for (const auto& s : result.pooled)
        for (const auto& w : s.warnings) {
          out.warnings.push_back(tag + s.term + ": " + w);
          out.log.push_back(tag + "warning " + s.term + ": " + w);
        }
      out.models.push_back(std::move(result));
    }
    out.batches.push_back(std::move(prepared));
  }
  return out;
}

json pooled_json(const PipelineResult& result, const RunManifest& manifest) {
  json doc;
  doc["version"] = kVersion;
  doc["seed"] = manifest.seed;
  doc["results"] = json::array();
  for (const auto& m : result.models) {
    json entry;
    entry["network_type"] = m.network_type;
    entry["model"] = model_name(m.model);
    entry["terms"] = m.model.term_names();
    entry["networks_in"] = m.filtered.networks_in;
    entry["pool_seed"] = m.pool_seed;
    entry["exclusions"] = json::array();
    for (const auto& e : m.filtered.exclusions)
      entry["exclusions"].push_back({{"network_id", e.network_id}, {"reason", e.reason}});
    entry["pooled"] = json::array();
    for (const auto& s : m.pooled) {
      json t;
      t["term"] = s.term;
      t["label"] = term_label(s.term);
      t["mean"] = s.pooled.mean;
      t["sd"] = s.pooled.sd;
      t["median"] = s.pooled.median;
      t["ci"] = {s.pooled.lower, s.pooled.upper};
      t["tau_median"] = s.tau.median;
      t["tau_ci"] = {s.tau.lower, s.tau.upper};
      t["tau_country_median"] = s.tau_country.median;
      t["n_obs"] = s.n_observations;
      t["n_excluded"] = m.filtered.exclusions.size();
      t["rhat"] = s.max_rhat;
      t["ess"] = s.min_ess;
      t["countries"] = json::array();
      for (const auto& c : s.countries) {
        json cj = interval_json(c.mu);
        cj["country"] = c.country;
        cj["n_obs"] = c.observations;
        t["countries"].push_back(cj);
      }
      t["warnings"] = s.warnings;
      entry["pooled"].push_back(t);
    }
    doc["results"].push_back(entry);
  }
  return doc;
}

void write_outputs(const PipelineResult& result, const RunManifest& manifest) {
  const auto& dir = manifest.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string());

  for (const auto& b : result.batches)
    for (std::size_t r = 0; r < b.imputations.size(); ++r) {
      std::ostringstream os;
      write_attributes_csv(os, b.imputations[r], true);
      const std::string suffix = r == 0 ? "" : "_imp" + std::to_string(r + 1);
      write_file(dir / ("derived_attributes_" + b.network_type + suffix + ".csv"), os.str());
    }

  for (const auto& b : result.batches) {
    std::ostringstream os;
    os << "network_id,country,model,term,estimate,std_error,converged,separation,loglik\n";
    for (const auto& m : result.models) {
      if (m.network_type != b.network_type) continue;
      for (const auto& f : m.fits.fits)
        for (std::size_t k = 0; k < f.terms.size(); ++k) {
          const auto idx = static_cast<Eigen::Index>(k);
          os << f.network_id << ',' << f.country << ',' << f.model << ',' << f.terms[k] << ','
             << format_number(f.theta[idx]) << ',' << format_number(f.standard_errors[idx]) << ','
             << f.converged << ',' << f.separation_flag << ',' << format_number(f.log_likelihood)
             << '\n';
        }
    }
    write_file(dir / ("fits_" + b.network_type + ".csv"), os.str());
  }

  const json doc = pooled_json(result, manifest);
  write_file(dir / "pooled.json", doc.dump(2) + "\n");
  write_file(dir / "report.txt", render_report(doc));
  const auto forest = render_forest(doc);
  write_file(dir / "forest.csv", forest.csv);
  write_file(dir / "forest.svg", forest.svg);

  if (manifest.write_draws)
    for (const auto& m : result.models) {
      std::ostringstream os;
      os << "term,chain,iteration,parameter,value\n";
      for (const auto& s : m.pooled) {
        const auto& d = s.draws;
        for (std::size_t p = 0; p < d.parameters.size(); ++p)
          for (std::size_t c = 0; c < d.values[p].size(); ++c)
            for (std::size_t it = 0; it < d.values[p][c].size(); ++it)
              os << s.term << ',' << c << ',' << it << ',' << d.parameters[p] << ','
                 << format_number(d.values[p][c][it]) << '\n';
      }
      write_file(dir / ("draws_" + m.network_type + "_" + model_name(m.model) + ".csv"), os.str());
    }

  std::string log;
  for (const auto& line : result.log) log += line + "\n";
  write_file(dir / "run.log", log);
}

RunStatus run(RunManifest manifest, const RunOptions& options, bool strict) {
  if (options.seed) manifest.seed = *options.seed;
  if (options.imputations) manifest.imputations = *options.imputations;
  validate_manifest(manifest);
  manifest.pool.keep_draws = manifest.write_draws;
  const auto workers = resolve_workers(options.workers);
  const auto result = run_pipeline(manifest, workers);
  write_outputs(result, manifest);
  RunStatus status;
  status.warnings = result.warnings;
  status.exit_code = strict && !status.warnings.empty() ? 4 : 0;
  return status;
}

}  // namespace ergmpool
