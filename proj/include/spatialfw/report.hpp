// Serialization of sweep results and experiment configs: CSV, JSON, SVG.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spatialfw/harness.hpp"

namespace spatialfw {

inline constexpr std::string_view kCsvHeader =
    "policy,fraction,runs,outbreaks,outbreak_probability,ci95_halfwidth,"
    "mean_num_clusters,mean_max_cluster_size,mean_susceptible_count,dc_relaxed_rate";

/// git-describe style build version.
std::string_view version_string();

/// Shortest round-trip decimal representation.
std::string format_real(double v);

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
/// Parses a CSV written by write_csv. Throws std::runtime_error on a header
/// mismatch or malformed row. Policy min_distance is not part of the CSV
/// and comes back as 0.
std::vector<SweepRow> read_csv(std::istream& in);

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults(). Throws std::invalid_argument on
/// unknown policy names or spanning rules.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::ordered_json rows_to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> rows_from_json(const nlohmann::json& j);

/// Config echo, rows, per-policy critical estimates and version.
nlohmann::ordered_json result_to_json(const SweepResult& result);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static line chart, axes auto-scaled to the data.
std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<SvgSeries>& series);

/// Outbreak probability vs firewall percentage, one series per policy.
std::string outbreak_chart_svg(const std::vector<SweepRow>& rows);
/// Mean cluster count and mean largest cluster size vs firewall percentage.
std::string cluster_chart_svg(const std::vector<SweepRow>& rows);

struct EmitOptions {
  bool csv = true;
  bool json = true;
  bool svg = false;
};

/// Writes results.csv, results.json and optionally outbreak.svg and
/// clusters.svg under out_dir (created if missing). Returns the written
/// paths. Throws std::runtime_error if a file cannot be written.
std::vector<std::filesystem::path> emit_results(const SweepResult& result,
                                                const std::filesystem::path& out_dir,
                                                const EmitOptions& options = {});

}  // namespace spatialfw
