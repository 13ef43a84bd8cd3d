#include "spatialfw/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifndef SPATIALFW_VERSION
#define SPATIALFW_VERSION "0.1.0"
#endif

namespace spatialfw {

std::string_view version_string() { return SPATIALFW_VERSION; }

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.policy.kind) << ',' << format_real(r.fraction) << ',' << r.runs << ','
        << r.outbreaks << ',' << format_real(r.outbreak_probability) << ','
        << format_real(r.ci95_halfwidth) << ',' << format_real(r.mean_num_clusters) << ','
        << format_real(r.mean_max_cluster_size) << ','
        << format_real(r.mean_susceptible_count) << ',' << format_real(r.dc_relaxed_rate)
        << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("not a number: '" + s + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("not a count: '" + s + "'");
  }
  return v;
}

PolicyKind policy_or_throw(std::string_view name) {
  auto kind = parse_policy_kind(name);
  if (!kind) {
    throw std::invalid_argument("unknown policy '" + std::string(name) +
                                "' (expected random, degree, random-dc or degree-dc)");
  }
  return *kind;
}

}  // namespace

std::vector<SweepRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 10) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 10 fields");
    }
    SweepRow r;
    try {
      r.policy.kind = policy_or_throw(f[0]);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    r.fraction = parse_real(f[1]);
    r.runs = parse_count(f[2]);
    r.outbreaks = parse_count(f[3]);
    r.outbreak_probability = parse_real(f[4]);
    r.ci95_halfwidth = parse_real(f[5]);
    r.mean_num_clusters = parse_real(f[6]);
    r.mean_max_cluster_size = parse_real(f[7]);
    r.mean_susceptible_count = parse_real(f[8]);
    r.dc_relaxed_rate = parse_real(f[9]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

nlohmann::ordered_json policy_to_json(const FirewallPolicy& p) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(p.kind));
  if (p.distance_constrained()) j["min_distance"] = p.min_distance;
  return j;
}

}  // namespace

nlohmann::ordered_json config_to_json(const ExperimentConfig& c) {
  // workers is deliberately absent: outputs must not depend on it.
  nlohmann::ordered_json j;
  j["side_length"] = c.scenario.side_length;
  j["intensity"] = c.scenario.intensity;
  j["comm_range"] = c.scenario.comm_range;
  j["zone_radius"] = c.scenario.zone_radius;
  j["policies"] = nlohmann::ordered_json::array();
  for (const auto& p : c.policies) j["policies"].push_back(policy_to_json(p));
  j["fraction_grid"] = c.fraction_grid;
  j["runs_per_point"] = c.runs_per_point;
  j["master_seed"] = c.master_seed;
  j["spanning_rule"] = std::string(to_string(c.scenario.spanning_rule));
  j["critical_threshold"] = c.critical_threshold;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c = ExperimentConfig::defaults();
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  auto& s = c.scenario;
  s.side_length = j.value("side_length", s.side_length);
  s.intensity = j.value("intensity", s.intensity);
  s.comm_range = j.value("comm_range", s.comm_range);
  s.zone_radius = j.value("zone_radius", s.zone_radius);
  if (j.contains("spanning_rule")) {
    const auto name = j.at("spanning_rule").get<std::string>();
    auto rule = parse_spanning_rule(name);
    if (!rule) throw std::invalid_argument("unknown spanning_rule '" + name + "'");
    s.spanning_rule = *rule;
  }
  const double min_distance =
      j.value("min_distance", default_min_distance(s.zone_radius));

  if (j.contains("policies")) {
    c.policies.clear();
    for (const auto& item : j.at("policies")) {
      FirewallPolicy p;
      if (item.is_string()) {
        p.kind = policy_or_throw(item.get<std::string>());
        if (p.distance_constrained()) p.min_distance = min_distance;
      } else {
        p.kind = policy_or_throw(item.at("kind").get<std::string>());
        if (p.distance_constrained()) p.min_distance = item.value("min_distance", min_distance);
      }
      c.policies.push_back(p);
    }
  } else {
    for (auto& p : c.policies) {
      if (p.distance_constrained()) p.min_distance = min_distance;
    }
  }
  if (j.contains("fraction_grid")) c.fraction_grid = j.at("fraction_grid").get<std::vector<double>>();
  c.runs_per_point = j.value("runs_per_point", c.runs_per_point);
  c.master_seed = j.value("master_seed", c.master_seed);
  c.critical_threshold = j.value("critical_threshold", c.critical_threshold);
  c.workers = j.value("workers", c.workers);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::ordered_json rows_to_json(const std::vector<SweepRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["policy"] = policy_to_json(r.policy);
    j["fraction"] = r.fraction;
    j["runs"] = r.runs;
    j["outbreaks"] = r.outbreaks;
    j["outbreak_probability"] = r.outbreak_probability;
    j["ci95_halfwidth"] = r.ci95_halfwidth;
    j["mean_num_clusters"] = r.mean_num_clusters;
    j["mean_max_cluster_size"] = r.mean_max_cluster_size;
    j["mean_susceptible_count"] = r.mean_susceptible_count;
    j["dc_relaxed_rate"] = r.dc_relaxed_rate;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<SweepRow> rows_from_json(const nlohmann::json& arr) {
  std::vector<SweepRow> rows;
  for (const auto& j : arr) {
    SweepRow r;
    const auto& p = j.at("policy");
    r.policy.kind = policy_or_throw(p.at("kind").get<std::string>());
    r.policy.min_distance = p.value("min_distance", 0.0);
    r.fraction = j.at("fraction").get<double>();
    r.runs = j.at("runs").get<std::size_t>();
    r.outbreaks = j.at("outbreaks").get<std::size_t>();
    r.outbreak_probability = j.at("outbreak_probability").get<double>();
    r.ci95_halfwidth = j.at("ci95_halfwidth").get<double>();
    r.mean_num_clusters = j.at("mean_num_clusters").get<double>();
    r.mean_max_cluster_size = j.at("mean_max_cluster_size").get<double>();
    r.mean_susceptible_count = j.at("mean_susceptible_count").get<double>();
    r.dc_relaxed_rate = j.at("dc_relaxed_rate").get<double>();
    rows.push_back(r);
  }
  return rows;
}

nlohmann::ordered_json result_to_json(const SweepResult& result) {
  nlohmann::ordered_json j;
  j["version"] = std::string(version_string());
  j["config"] = config_to_json(result.config);
  j["critical_definition"] =
      "smallest grid fraction from which outbreak_probability stays <= critical_threshold";
  j["rows"] = rows_to_json(result.rows);
  auto crit = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.critical.size(); ++i) {
    nlohmann::ordered_json c;
    c["policy"] = std::string(to_string(result.config.policies[i].kind));
    const auto& est = result.critical[i];
    c["reached"] = est.reached();
    c["fraction"] = est.fraction ? nlohmann::ordered_json(*est.fraction) : nullptr;
    c["interpolated"] = est.interpolated ? nlohmann::ordered_json(*est.interpolated) : nullptr;
    crit.push_back(std::move(c));
  }
  j["critical_percentages"] = std::move(crit);
  return j;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<SvgSeries>& series) {
  constexpr double W = 640, H = 420, ml = 70, mr = 150, mt = 40, mb = 55;
  double x0 = INFINITY, x1 = -INFINITY, y0 = 0.0, y1 = -INFINITY;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1;
  if (!std::isfinite(y1)) y1 = 1;
  if (x1 <= x0) x1 = x0 + 1;
  if (y1 <= y0) y1 = y0 + 1;
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto sx = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
  auto sy = [&](double v) { return mt + ph - (v - y0) / (y1 - y0) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape_xml(title) << "</text>\n";
  o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x0 + (x1 - x0) * t / 5.0;
    const double yv = y0 + (y1 - y0) * t / 5.0;
    o << "<line x1=\"" << fixed(sx(xv), 2) << "\" y1=\"" << mt + ph << "\" x2=\""
      << fixed(sx(xv), 2) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << fixed(sx(xv), 2) << "\" y=\"" << mt + ph + 18
      << "\" text-anchor=\"middle\">" << fixed(xv, 1) << "</text>\n";
    o << "<line x1=\"" << ml - 5 << "\" y1=\"" << fixed(sy(yv), 2) << "\" x2=\"" << ml
      << "\" y2=\"" << fixed(sy(yv), 2) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << ml - 8 << "\" y=\"" << fixed(sy(yv) + 4, 2)
      << "\" text-anchor=\"end\">" << fixed(yv, 2) << "</text>\n";
  }
  o << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
    << escape_xml(x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << mt + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      o << (k ? " " : "") << fixed(sx(s.x[k]), 2) << ',' << fixed(sy(s.y[k]), 2);
    }
    o << "\"/>\n";
    const double ly = mt + 10 + 18.0 * static_cast<double>(i);
    o << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 32
      << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << ml + pw + 38 << "\" y=\"" << ly + 4 << "\">" << escape_xml(s.label)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

namespace {

std::vector<SvgSeries> series_by_policy(const std::vector<SweepRow>& rows,
                                        double SweepRow::*field, const std::string& suffix) {
  std::vector<SvgSeries> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    const std::string name = std::string(to_string(r.policy.kind)) + suffix;
    auto [it, inserted] = index.try_emplace(name, out.size());
    if (inserted) out.push_back({name, {}, {}});
    out[it->second].x.push_back(100.0 * r.fraction);
    out[it->second].y.push_back(r.*field);
  }
  return out;
}

}  // namespace

std::string outbreak_chart_svg(const std::vector<SweepRow>& rows) {
  return render_line_chart_svg("Outbreak probability vs firewall percentage",
                               "firewalls (% of devices)", "outbreak probability",
                               series_by_policy(rows, &SweepRow::outbreak_probability, ""));
}

std::string cluster_chart_svg(const std::vector<SweepRow>& rows) {
  auto s = series_by_policy(rows, &SweepRow::mean_num_clusters, " clusters");
  auto m = series_by_policy(rows, &SweepRow::mean_max_cluster_size, " max size");
  s.insert(s.end(), m.begin(), m.end());
  return render_line_chart_svg("Susceptible clusters vs firewall percentage",
                               "firewalls (% of devices)", "devices / clusters", s);
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::vector<std::filesystem::path> emit_results(const SweepResult& result,
                                                const std::filesystem::path& out_dir,
                                                const EmitOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  if (options.csv) {
    std::ostringstream csv;
    write_csv(csv, result.rows);
    written.push_back(out_dir / "results.csv");
    write_file(written.back(), csv.str());
  }
  if (options.json) {
    written.push_back(out_dir / "results.json");
    write_file(written.back(), result_to_json(result).dump(2) + "\n");
  }
  if (options.svg) {
    written.push_back(out_dir / "outbreak.svg");
    write_file(written.back(), outbreak_chart_svg(result.rows));
    written.push_back(out_dir / "clusters.svg");
    write_file(written.back(), cluster_chart_svg(result.rows));
  }
  return written;
}

}  // namespace spatialfw
