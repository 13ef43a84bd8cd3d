// Monte Carlo sweeps over firewall fractions and selection policies.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spatialfw/firewall.hpp"
#include "spatialfw/percolation.hpp"
#include "spatialfw/rgg.hpp"
#include "spatialfw/spatial_domain.hpp"

namespace spatialfw {

/// Scalar parameters of one realization. Defaults are the reference
/// scenario: 4 km torus, 80 devices/km^2, 200 m range and zone radius.
struct ScenarioParams {
  double side_length = 4000.0;
  double intensity = 80.0;  // devices per km^2
  double comm_range = 200.0;
  double zone_radius = 200.0;
  SpanningRule spanning_rule = SpanningRule::Both;

  void validate() const;
};

struct ExperimentConfig {
  ScenarioParams scenario;
  std::vector<FirewallPolicy> policies;
  std::vector<double> fraction_grid;
  std::size_t runs_per_point = 500;
  std::uint64_t master_seed = 1;
  double critical_threshold = 0.05;
  std::size_t workers = 1;

  /// Reference sweep: all four policies (DC spacing 2 * zone_radius),
  /// fractions 0..0.12 in 0.01 steps, 500 runs per point.
  static ExperimentConfig defaults();

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

/// Default minimum firewall spacing for the DC policies: tangent zones.
double default_min_distance(double zone_radius);
FirewallPolicy make_policy(PolicyKind kind, double zone_radius);

/// Everything a sweep needs from one realization.
struct RunRecord {
  bool wraps_x = false;
  bool wraps_y = false;
  bool percolates = false;
  std::size_t num_clusters = 0;
  std::size_t max_cluster_size = 0;
  std::size_t device_count = 0;
  std::size_t firewall_count = 0;
  std::size_t susceptible_count = 0;
  bool dc_relaxed = false;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Full artefacts of one realization, for the CLI and tests.
struct SingleRun {
  DeviceSet devices;
  AdjacencyGraph graph;
  QuarantineLayout layout;
  PercolationOutcome outcome;

  RunRecord record() const;
};

/// sample_ppp -> build_rgg -> select_firewalls -> apply_secured_zones ->
/// detect_spanning. Deterministic per run_seed.
SingleRun run_single(const ScenarioParams& params, const FirewallPolicy& policy,
                     double fraction, std::uint64_t run_seed);

/// Seed of run `run` at grid point (policy_index, fraction_index).
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t policy_index,
                       std::size_t fraction_index, std::size_t run);

struct SweepRow {
  FirewallPolicy policy;
  double fraction = 0.0;
  std::size_t runs = 0;
  std::size_t outbreaks = 0;
  double outbreak_probability = 0.0;
  double ci95_halfwidth = 0.0;
  double mean_num_clusters = 0.0;
  double mean_max_cluster_size = 0.0;
  double mean_susceptible_count = 0.0;
  double dc_relaxed_rate = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct CriticalEstimate {
  /// Smallest grid fraction from which every probability stays <= threshold.
  std::optional<double> fraction;
  /// Linear interpolation of the threshold crossing just below `fraction`.
  std::optional<double> interpolated;

  bool reached() const { return fraction.has_value(); }
  friend bool operator==(const CriticalEstimate&, const CriticalEstimate&) = default;
};

struct SweepResult {
  ExperimentConfig config;
  std::vector<SweepRow> rows;  // policy-major, then fraction
  std::vector<CriticalEstimate> critical;  // one per policy

  std::vector<SweepRow> rows_for(std::size_t policy_index) const;
};

/// Raw per-run records, indexed [policy][fraction][run]. Parallel over
/// `config.workers` threads; the result does not depend on the worker count.
std::vector<std::vector<std::vector<RunRecord>>> collect_runs(const ExperimentConfig& config);

/// Folds raw records into rows using config.scenario.spanning_rule.
SweepResult aggregate_runs(const ExperimentConfig& config,
                           const std::vector<std::vector<std::vector<RunRecord>>>& runs);

SweepResult run_sweep(const ExperimentConfig& config);

/// Throws std::invalid_argument on empty rows or a threshold outside (0, 1).
CriticalEstimate estimate_critical_percentage(const std::vector<SweepRow>& rows,
                                              double threshold);

/// 1.96 * sqrt(p (1 - p) / n).
double binomial_halfwidth95(double p, std::size_t n);

}  // namespace spatialfw
