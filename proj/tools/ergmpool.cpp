// ergmpool command line: run, simulate, recovery, gof.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ergmpool/batch_io.hpp"
#include "ergmpool/error.hpp"
#include "ergmpool/fit.hpp"
#include "ergmpool/parallel.hpp"
#include "ergmpool/pipeline.hpp"
#include "ergmpool/recovery.hpp"
#include "ergmpool/rng.hpp"
#include "ergmpool/sim.hpp"
#include "ergmpool/version.hpp"

namespace fs = std::filesystem;
using namespace ergmpool;

namespace {

Eigen::VectorXd parse_theta(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ValidationError("--theta: cannot parse '" + cell + "'");
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

nlohmann::json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open " + file.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pooled ERGM estimation for batches of small directed networks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::size_t> workers;
  std::optional<std::uint64_t> seed;
  bool strict = false;
  std::optional<std::size_t> imputations;
  app.add_option("--workers", workers, "Worker threads (default ERGMPOOL_WORKERS or all cores)");
  app.add_option("--seed", seed, "Master seed, overriding the manifest or config");
  app.add_flag("--strict", strict, "Exit with status 4 when convergence warnings are present");
  app.add_option("--imputations", imputations, "Number of multiple imputations");

  auto* run_cmd = app.add_subcommand("run", "Fit, pool and report a batch described by a manifest");
  std::string manifest_path;
  run_cmd->add_option("--manifest", manifest_path, "Run manifest (JSON)")->required();

  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a synthetic batch");
  std::string sim_config, sim_out = ".";
  sim_cmd->add_option("--config", sim_config, "Simulation config (JSON)")->required();
  sim_cmd->add_option("--out", sim_out, "Output directory for edges.csv and attributes.csv");

  auto* rec_cmd = app.add_subcommand("recovery", "Parameter recovery study at known theta");
  RecoveryOptions rec;
  std::string rec_theta;
  rec_cmd->add_option("--preset", rec.preset, "rq1, rq2, h1 or h2")->required();
  rec_cmd->add_option("--networks", rec.networks, "Networks per replication");
  rec_cmd->add_option("--nodes", rec.nodes, "Nodes per network");
  rec_cmd->add_option("--replications", rec.replications, "Replications");
  rec_cmd->add_option("--theta", rec_theta, "Comma-separated generating values");

  auto* gof_cmd = app.add_subcommand("gof", "Simulation goodness of fit for one network");
  std::string gof_network, gof_model, gof_manifest, gof_type = "seeking", gof_edges, gof_attrs,
                                                     gof_ratings;
  std::size_t gof_replicates = 1000;
  gof_cmd->add_option("--network", gof_network, "Network id")->required();
  gof_cmd->add_option("--model", gof_model, "Preset name")->required();
  gof_cmd->add_option("--manifest", gof_manifest, "Take input files from a run manifest");
  gof_cmd->add_option("--type", gof_type, "Network type within the manifest");
  gof_cmd->add_option("--edges", gof_edges, "Edges CSV");
  gof_cmd->add_option("--attributes", gof_attrs, "Attributes CSV");
  gof_cmd->add_option("--ratings", gof_ratings, "Ratings CSV");
  gof_cmd->add_option("--replicates", gof_replicates, "Simulated networks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      RunOptions opts{workers, seed, imputations};
      const auto status = run(load_manifest(manifest_path), opts, strict);
      for (const auto& w : status.warnings) std::cerr << "warning: " << w << '\n';
      return status.exit_code;
    }

    if (*sim_cmd) {
      auto config = parse_sim_config(read_json(sim_config));
      if (seed) config.seed = *seed;
      const auto batch = simulate_batch(config);
      fs::create_directories(sim_out);
      std::ofstream e(fs::path(sim_out) / "edges.csv", std::ios::binary);
      std::ofstream a(fs::path(sim_out) / "attributes.csv", std::ios::binary);
      if (!e || !a) throw ValidationError("cannot write into " + sim_out);
      write_edges_csv(e, batch);
      write_attributes_csv(a, batch, true);
      std::cout << "wrote " << batch.size() << " networks to " << sim_out << '\n';
      return 0;
    }

    if (*rec_cmd) {
      if (seed) rec.seed = *seed;
      if (!rec_theta.empty()) rec.theta = parse_theta(rec_theta);
      rec.workers = resolve_workers(workers);
      std::cout << format_recovery(recovery_study(rec));
      return 0;
    }

    if (*gof_cmd) {
      InputFiles files;
      std::uint64_t master = seed.value_or(1);
      std::size_t m = imputations.value_or(1);
      int sweeps = 10;
      if (!gof_manifest.empty()) {
        const auto manifest = load_manifest(gof_manifest);
        auto it = std::find_if(manifest.inputs.begin(), manifest.inputs.end(),
                               [&](auto& p) { return p.first == gof_type; });
        if (it == manifest.inputs.end())
          throw ValidationError("manifest has no '" + gof_type + "' networks");
        files = it->second;
        if (!seed) master = manifest.seed;
        if (!imputations) m = manifest.imputations;
        sweeps = manifest.imputation_iterations;
      } else {
        if (gof_edges.empty() || gof_attrs.empty())
          throw ValidationError("gof needs --manifest or both --edges and --attributes");
        files.edges = gof_edges;
        files.attributes = gof_attrs;
        if (!gof_ratings.empty()) files.ratings = gof_ratings;
      }
      const auto& presets = ModelSpec::preset_names();
      if (std::find(presets.begin(), presets.end(), gof_model) == presets.end())
        throw ValidationError("unknown preset '" + gof_model + "'");
      const auto model = ModelSpec::preset_model(gof_model);
      auto prepared = prepare_batch(gof_type, load_batch(files.edges, files.attributes, files.ratings),
                                    m, sweeps, stream_seed(master, {hash_string("impute")}));
      const auto& data = prepared.imputations.front();
      auto it = std::find_if(data.begin(), data.end(),
                             [&](const NetworkData& d) { return d.network.id() == gof_network; });
      if (it == data.end()) throw ValidationError("no network '" + gof_network + "'");
      const auto fit = fit_exact(it->network, it->attributes, model);
      std::cout << "# network " << gof_network << " model " << gof_model
                << (fit.separation_flag ? " (separation: ridge fit)" : "") << '\n';
      std::cout << "term,estimate,observed,simulated_mean,simulated_sd,quantile,lower_1,upper_99\n";
      const auto records = gof(it->network, it->attributes, model, fit.theta,
                               stream_seed(master, {hash_string("gof")}), gof_replicates);
      for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        std::cout << r.term << ',' << format_number(fit.theta[static_cast<Eigen::Index>(k)]) << ','
                  << format_number(r.observed) << ',' << format_number(r.simulated_mean) << ','
                  << format_number(r.simulated_sd) << ',' << format_number(r.quantile) << ','
                  << format_number(r.lower_1) << ',' << format_number(r.upper_99) << '\n';
      }
      return 0;
    }
  } catch (const EmptyPoolError& e) {
    std::cerr << "error: empty pool: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
