#include "spatialfw/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace spatialfw {

namespace {

// Sub-stream tags inside one run.
constexpr std::uint64_t kStreamDevices = 1;
constexpr std::uint64_t kStreamFirewalls = 2;

}  // namespace

void ScenarioParams::validate() const {
  // TorusRegion rejects a bad side length with its own message.
  const TorusRegion region(side_length);
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("intensity must be finite and >= 0");
  }
  if (!(comm_range > 0.0) || comm_range > 0.5 * side_length) {
    throw std::invalid_argument("comm_range must lie in (0, side_length / 2]");
  }
  if (!(zone_radius > 0.0) || zone_radius > 0.5 * side_length) {
    throw std::invalid_argument("zone_radius must lie in (0, side_length / 2]");
  }
}

double default_min_distance(double zone_radius) { return 2.0 * zone_radius; }

FirewallPolicy make_policy(PolicyKind kind, double zone_radius) {
  FirewallPolicy p{kind, 0.0};
  if (p.distance_constrained()) p.min_distance = default_min_distance(zone_radius);
  return p;
}

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  for (PolicyKind k : {PolicyKind::Random, PolicyKind::DegreeAware, PolicyKind::RandomDC,
                       PolicyKind::DegreeAwareDC}) {
    c.policies.push_back(make_policy(k, c.scenario.zone_radius));
  }
  for (int pct = 0; pct <= 12; ++pct) c.fraction_grid.push_back(pct / 100.0);
  return c;
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (policies.empty()) throw std::invalid_argument("at least one policy is required");
  for (const auto& p : policies) p.validate();
  if (fraction_grid.empty()) throw std::invalid_argument("fraction_grid is empty");
  for (std::size_t i = 0; i < fraction_grid.size(); ++i) {
    const double f = fraction_grid[i];
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("fractions must lie in [0, 1]");
    if (i > 0 && !(f > fraction_grid[i - 1])) {
      throw std::invalid_argument("fraction_grid must be strictly increasing");
    }
  }
  if (runs_per_point < 1) throw std::invalid_argument("runs_per_point must be >= 1");
  if (!(critical_threshold > 0.0 && critical_threshold < 1.0)) {
    throw std::invalid_argument("critical_threshold must lie in (0, 1)");
  }
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

RunRecord SingleRun::record() const {
  RunRecord r;
  r.wraps_x = outcome.wraps_x;
  r.wraps_y = outcome.wraps_y;
  r.percolates = outcome.percolates;
  r.num_clusters = outcome.cluster_report.num_clusters;
  r.max_cluster_size = outcome.cluster_report.max_cluster_size;
  r.device_count = devices.count();
  r.firewall_count = layout.firewall_ids.size();
  r.susceptible_count = layout.susceptible_count();
  r.dc_relaxed = layout.dc_relaxed;
  return r;
}

SingleRun run_single(const ScenarioParams& params, const FirewallPolicy& policy,
                     double fraction, std::uint64_t seed) {
  params.validate();
  const TorusRegion region(params.side_length);
  DeviceSet devices = sample_ppp(region, params.intensity, derive_seed(seed, kStreamDevices));
  AdjacencyGraph graph = build_rgg(devices, params.comm_range);
  auto selection =
      select_firewalls(graph, devices, policy, fraction, derive_seed(seed, kStreamFirewalls));
  QuarantineLayout layout =
      apply_secured_zones(devices, selection.firewall_ids, params.zone_radius);
  layout.dc_relaxed = selection.dc_relaxed;
  PercolationOutcome outcome =
      detect_spanning(graph, devices, layout.susceptible, params.spanning_rule);
  return SingleRun{std::move(devices), std::move(graph), std::move(layout), std::move(outcome)};
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t policy_index,
                       std::size_t fraction_index, std::size_t run) {
  return derive_seed(master_seed, policy_index, fraction_index, run);
}

std::vector<SweepRow> SweepResult::rows_for(std::size_t policy_index) const {
  const std::size_t per = config.fraction_grid.size();
  return {rows.begin() + static_cast<std::ptrdiff_t>(policy_index * per),
          rows.begin() + static_cast<std::ptrdiff_t>((policy_index + 1) * per)};
}

std::vector<std::vector<std::vector<RunRecord>>> collect_runs(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n_pol = config.policies.size();
  const std::size_t n_frac = config.fraction_grid.size();
  const std::size_t n_runs = config.runs_per_point;
  std::vector<std::vector<std::vector<RunRecord>>> out(
      n_pol, std::vector<std::vector<RunRecord>>(n_frac, std::vector<RunRecord>(n_runs)));

  const std::size_t total = n_pol * n_frac * n_runs;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::size_t unit = next.fetch_add(1, std::memory_order_relaxed);
      if (unit >= total || failed.load(std::memory_order_relaxed)) return;
      const std::size_t run = unit % n_runs;
      const std::size_t fi = (unit / n_runs) % n_frac;
      const std::size_t pi = unit / (n_runs * n_frac);
      try {
        out[pi][fi][run] = run_single(config.scenario, config.policies[pi],
                                      config.fraction_grid[fi],
                                      run_seed(config.master_seed, pi, fi, run))
                               .record();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const std::size_t threads = std::min(config.workers, total);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double binomial_halfwidth95(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

SweepResult aggregate_runs(const ExperimentConfig& config,
                           const std::vector<std::vector<std::vector<RunRecord>>>& runs) {
  SweepResult result;
  result.config = config;
  const auto rule = config.scenario.spanning_rule;
  for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
    for (std::size_t fi = 0; fi < config.fraction_grid.size(); ++fi) {
      const auto& recs = runs.at(pi).at(fi);
      SweepRow row;
      row.policy = config.policies[pi];
      row.fraction = config.fraction_grid[fi];
      row.runs = recs.size();
      double clusters = 0, max_size = 0, susceptible = 0, relaxed = 0;
      for (const RunRecord& r : recs) {
        if (percolates_under(rule, r.wraps_x, r.wraps_y)) ++row.outbreaks;
        clusters += static_cast<double>(r.num_clusters);
        max_size += static_cast<double>(r.max_cluster_size);
        susceptible += static_cast<double>(r.susceptible_count);
        relaxed += r.dc_relaxed ? 1.0 : 0.0;
      }
      const double n = static_cast<double>(row.runs);
      row.outbreak_probability = static_cast<double>(row.outbreaks) / n;
      row.ci95_halfwidth = binomial_halfwidth95(row.outbreak_probability, row.runs);
      row.mean_num_clusters = clusters / n;
      row.mean_max_cluster_size = max_size / n;
      row.mean_susceptible_count = susceptible / n;
      row.dc_relaxed_rate = relaxed / n;
      result.rows.push_back(row);
    }
  }
  for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
    result.critical.push_back(
        estimate_critical_percentage(result.rows_for(pi), config.critical_threshold));
  }
  return result;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  return aggregate_runs(config, collect_runs(config));
}

CriticalEstimate estimate_critical_percentage(const std::vector<SweepRow>& rows,
                                              double threshold) {
  if (rows.empty()) throw std::invalid_argument("no rows to estimate from");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }
  // Walk back from the largest fraction while the tail stays below threshold.
  std::size_t first = rows.size();
  while (first > 0 && rows[first - 1].outbreak_probability <= threshold) --first;

  CriticalEstimate est;
  if (first == rows.size()) return est;
  est.fraction = rows[first].fraction;
  if (first == 0) {
    est.interpolated = rows[0].fraction;
  } else {
    const SweepRow& hi = rows[first - 1];  // above threshold
    const SweepRow& lo = rows[first];
    const double t = (hi.outbreak_probability - threshold) /
                     (hi.outbreak_probability - lo.outbreak_probability);
    est.interpolated = hi.fraction + t * (lo.fraction - hi.fraction);
  }
  return est;
}

}  // namespace spatialfw
