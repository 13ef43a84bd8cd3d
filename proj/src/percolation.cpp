#include "spatialfw/percolation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spatialfw {

std::string_view to_string(SpanningRule rule) {
  return rule == SpanningRule::Both ? "both" : "either";
}

std::optional<SpanningRule> parse_spanning_rule(std::string_view name) {
  if (name == "both") return SpanningRule::Both;
  if (name == "either") return SpanningRule::Either;
  return std::nullopt;
}

bool percolates_under(SpanningRule rule, bool wraps_x, bool wraps_y) {
  return rule == SpanningRule::Both ? (wraps_x && wraps_y) : (wraps_x || wraps_y);
}

WrapDetector::WrapDetector(const TorusRegion& region, std::span<const Point> positions)
    : region_(region),
      positions_(positions),
      tolerance_(1e-6 * region.side_length()),
      parent_(positions.size()),
      size_(positions.size(), 1),
      offset_(positions.size()),
      flags_(positions.size(), 0) {
  std::iota(parent_.begin(), parent_.end(), VertexId{0});
}

VertexId WrapDetector::find(VertexId v) {
  path_.clear();
  while (parent_[v] != v) {
    path_.push_back(v);
    v = parent_[v];
  }
  // Full compression, walking from the node nearest the root outwards so each
  // offset is re-based on an already re-based parent.
  for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
    const VertexId w = *it;
    const VertexId p = parent_[w];
    if (p != v) {
      offset_[w].x += offset_[p].x;
      offset_[w].y += offset_[p].y;
      parent_[w] = v;
    }
  }
  return v;
}

void WrapDetector::add_edge(VertexId u, VertexId v) {
  const Point d = region_.displacement(positions_[u], positions_[v]);
  const VertexId ru = find(u);
  const VertexId rv = find(v);
  // After find(), offset_[x] is x relative to its root (roots carry zero).
  const double gx = offset_[u].x + d.x - offset_[v].x;
  const double gy = offset_[u].y + d.y - offset_[v].y;

  if (ru == rv) {
    if (std::abs(gx) > tolerance_) flags_[ru] |= kWrapX;
    if (std::abs(gy) > tolerance_) flags_[ru] |= kWrapY;
    return;
  }
  if (size_[ru] >= size_[rv]) {
    parent_[rv] = ru;
    offset_[rv] = {gx, gy};
    size_[ru] += size_[rv];
    flags_[ru] |= flags_[rv];
  } else {
    parent_[ru] = rv;
    offset_[ru] = {-gx, -gy};
    size_[rv] += size_[ru];
    flags_[rv] |= flags_[ru];
  }
}

PercolationOutcome detect_spanning(const AdjacencyGraph& graph,
                                   const DeviceSet& devices,
                                   std::span<const std::uint8_t> susceptible,
                                   SpanningRule rule) {
  const std::size_t n = graph.vertex_count();
  if (susceptible.size() != n || devices.count() != n) {
    throw std::invalid_argument("mask, graph and device set sizes differ");
  }
  if (!(graph.region() == devices.region())) {
    throw std::invalid_argument("graph and device set use different regions");
  }

  WrapDetector detector(devices.region(), devices.positions());
  for (VertexId u = 0; u < n; ++u) {
    if (!susceptible[u]) continue;
    for (VertexId v : graph.neighbors(u)) {
      if (v > u && susceptible[v]) detector.add_edge(u, v);
    }
  }

  PercolationOutcome out;
  std::vector<std::int64_t> roots(n, ClusterReport::kInactive);
  for (VertexId v = 0; v < n; ++v) {
    if (!susceptible[v]) continue;
    roots[v] = detector.find(v);
    out.wraps_x = out.wraps_x || detector.wraps_x(v);
    out.wraps_y = out.wraps_y || detector.wraps_y(v);
  }
  out.percolates = percolates_under(rule, out.wraps_x, out.wraps_y);
  out.cluster_report = make_cluster_report(roots);
  return out;
}

ClusterReport cluster_stats(const AdjacencyGraph& graph,
                            std::span<const std::uint8_t> susceptible) {
  return connected_components(graph, susceptible);
}

}  // namespace spatialfw
