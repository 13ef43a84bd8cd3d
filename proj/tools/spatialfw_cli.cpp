// spatialfw: command line front end.
//
//   spatialfw sweep  --config FILE [--policies LIST] [--runs N] [--seed S]
//                    [--out DIR] [--workers N] [--rule both|either] [--svg]
//   spatialfw single --fraction F --policy P --seed S
//                    [--dump-graph FILE] [--dump-layout FILE]
//   spatialfw sir    --fraction F --policy P --beta B --delta D --seed S
//                    [--t-max T] [--trace FILE]
//   spatialfw plot   --in results.csv --out FILE.svg [--clusters]
//
// single and sir accept --config FILE for the scenario parameters as well.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spatialfw/epidemic.hpp"
#include "spatialfw/harness.hpp"
#include "spatialfw/random.hpp"
#include "spatialfw/report.hpp"

using namespace spatialfw;

namespace {

std::vector<FirewallPolicy> parse_policy_list(const std::string& list, double min_distance) {
  std::vector<FirewallPolicy> out;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto kind = parse_policy_kind(name);
    if (!kind) throw std::invalid_argument("unknown policy '" + name + "'");
    FirewallPolicy p{*kind, 0.0};
    if (p.distance_constrained()) p.min_distance = min_distance;
    out.push_back(p);
  }
  if (out.empty()) throw std::invalid_argument("empty policy list");
  return out;
}

FirewallPolicy parse_single_policy(const std::string& name, const ExperimentConfig& base) {
  auto kind = parse_policy_kind(name);
  if (!kind) throw std::invalid_argument("unknown policy '" + name + "'");
  for (const auto& p : base.policies) {
    if (p.kind == *kind) return p;
  }
  return make_policy(*kind, base.scenario.zone_radius);
}

void print_outcome(const SingleRun& run, std::uint64_t seed, const FirewallPolicy& policy,
                   double fraction) {
  const auto rec = run.record();
  nlohmann::ordered_json j;
  j["policy"] = std::string(to_string(policy.kind));
  j["fraction"] = fraction;
  j["seed"] = seed;
  j["devices"] = rec.device_count;
  j["edges"] = run.graph.edge_count();
  j["firewalls"] = rec.firewall_count;
  j["protected"] = run.layout.protected_count();
  j["susceptible"] = rec.susceptible_count;
  j["dc_relaxed"] = rec.dc_relaxed;
  j["wraps_x"] = rec.wraps_x;
  j["wraps_y"] = rec.wraps_y;
  j["percolates"] = rec.percolates;
  j["num_clusters"] = rec.num_clusters;
  j["max_cluster_size"] = rec.max_cluster_size;
  std::cout << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial firewall placement and malware quarantine simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version_string()));

  std::string config_path;
  auto base_config = [&]() {
    return config_path.empty() ? ExperimentConfig::defaults() : load_config(config_path);
  };

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over firewall fractions");
  std::string policies;
  std::size_t runs = 0, workers = 0;
  std::uint64_t sweep_seed = 0;
  std::string out_dir = "results";
  std::string rule;
  bool svg = false;
  sweep->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  sweep->add_option("--policies", policies, "Comma list: random,degree,random-dc,degree-dc");
  auto* runs_opt = sweep->add_option("--runs", runs, "Runs per grid point")->check(CLI::PositiveNumber);
  auto* seed_opt = sweep->add_option("--seed", sweep_seed, "Master seed");
  sweep->add_option("--out", out_dir, "Output directory");
  auto* workers_opt =
      sweep->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--rule", rule, "Spanning rule")->check(CLI::IsMember({"both", "either"}));
  sweep->add_flag("--svg", svg, "Also write outbreak.svg and clusters.svg");

  // single
  auto* single = app.add_subcommand("single", "One realization");
  double fraction = 0.0;
  std::string policy_name;
  std::uint64_t seed = 0;
  std::string dump_graph, dump_layout;
  single->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  single->add_option("--fraction", fraction, "Firewall fraction")->required()->check(CLI::Range(0.0, 1.0));
  single->add_option("--policy", policy_name, "Selection policy")->required();
  single->add_option("--seed", seed, "Run seed")->required();
  single->add_option("--dump-graph", dump_graph, "Write edge list");
  single->add_option("--dump-layout", dump_layout, "Write device layout CSV");

  // sir
  auto* sir = app.add_subcommand("sir", "SIR epidemic on one quarantined realization");
  double beta = 1.0, delta = 1.0, t_max = std::numeric_limits<double>::infinity();
  std::string trace_path;
  sir->add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  sir->add_option("--fraction", fraction, "Firewall fraction")->required()->check(CLI::Range(0.0, 1.0));
  sir->add_option("--policy", policy_name, "Selection policy")->required();
  sir->add_option("--beta", beta, "Per-edge infection rate")->required()->check(CLI::NonNegativeNumber);
  sir->add_option("--delta", delta, "Recovery rate")->required()->check(CLI::NonNegativeNumber);
  sir->add_option("--seed", seed, "Seed")->required();
  sir->add_option("--t-max", t_max, "Time horizon (default: run to absorption)");
  sir->add_option("--trace", trace_path, "Write event trace CSV");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG chart from a results CSV");
  std::string in_csv, out_svg;
  bool clusters = false;
  plot->add_option("--in", in_csv, "results.csv")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", out_svg, "Output SVG")->required();
  plot->add_flag("--clusters", clusters, "Plot cluster statistics instead of outbreak probability");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      ExperimentConfig cfg = base_config();
      if (!policies.empty()) {
        cfg.policies = parse_policy_list(policies, default_min_distance(cfg.scenario.zone_radius));
      }
      if (*runs_opt) cfg.runs_per_point = runs;
      if (*seed_opt) cfg.master_seed = sweep_seed;
      if (*workers_opt) cfg.workers = workers;
      if (!rule.empty()) cfg.scenario.spanning_rule = *parse_spanning_rule(rule);
      const SweepResult result = run_sweep(cfg);
      for (const auto& path : emit_results(result, out_dir, {true, true, svg})) {
        std::cerr << "wrote " << path.string() << '\n';
      }
      for (std::size_t i = 0; i < cfg.policies.size(); ++i) {
        const auto& est = result.critical[i];
        std::cout << to_string(cfg.policies[i].kind) << ": critical fraction ";
        if (est.reached()) {
          std::cout << format_real(*est.fraction) << " (interpolated "
                    << format_real(*est.interpolated) << ")\n";
        } else {
          std::cout << "not reached\n";
        }
      }
    } else if (*single) {
      const ExperimentConfig cfg = base_config();
      const FirewallPolicy policy = parse_single_policy(policy_name, cfg);
      const SingleRun run = run_single(cfg.scenario, policy, fraction, seed);
      if (!dump_graph.empty()) write_edge_list(dump_graph, run.graph);
      if (!dump_layout.empty()) write_layout_csv(dump_layout, run.devices, run.layout);
      print_outcome(run, seed, policy, fraction);
    } else if (*sir) {
      const ExperimentConfig cfg = base_config();
      const FirewallPolicy policy = parse_single_policy(policy_name, cfg);
      const SingleRun run = run_single(cfg.scenario, policy, fraction, seed);
      std::vector<VertexId> candidates;
      for (VertexId v = 0; v < run.devices.count(); ++v) {
        if (run.layout.susceptible[v]) candidates.push_back(v);
      }
      if (candidates.empty()) throw std::runtime_error("no susceptible device to infect");
      Engine rng(derive_seed(seed, 3));
      const VertexId seed_device = candidates[uniform_index(rng, candidates.size())];
      const EpidemicParams params{beta, delta, t_max};
      const auto trace =
          simulate_sir(run.graph, run.layout.susceptible, seed_device, params, derive_seed(seed, 4));
      if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot open " + trace_path + " for writing");
        write_trace_csv(out, trace);
      }
      const auto& labels = run.outcome.cluster_report.labels;
      std::size_t cluster_size = 0;
      for (auto l : labels) cluster_size += (l == labels[seed_device]) ? 1 : 0;
      auto j = nlohmann::ordered_json::parse(trace_summary_json(trace));
      j["seed_cluster_size"] = cluster_size;
      j["percolates"] = run.outcome.percolates;
      std::cout << j.dump(2) << '\n';
    } else if (*plot) {
      std::ifstream in(in_csv);
      const auto rows = read_csv(in);
      std::ofstream out(out_svg);
      if (!out) throw std::runtime_error("cannot open " + out_svg + " for writing");
      out << (clusters ? cluster_chart_svg(rows) : outbreak_chart_svg(rows));
      if (!out) throw std::runtime_error("failed writing " + out_svg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
