// Spanning (winding) detection for the susceptible subgraph on the torus.
//
// A cluster spans the wrap-around region in x when it contains a cycle
// whose unwrapped displacement has a nonzero x component. The detector is a
// union-find in which every vertex carries its unwrapped offset from the set
// root. Each edge contributes its minimal-image displacement; an edge that
// closes a cycle inside one set reveals the cycle's net displacement, which
// is either ~0 or a nonzero multiple of the side length per axis.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "spatialfw/rgg.hpp"

namespace spatialfw {

enum class SpanningRule { Both, Either };

std::string_view to_string(SpanningRule rule);
std::optional<SpanningRule> parse_spanning_rule(std::string_view name);

struct PercolationOutcome {
  bool wraps_x = false;
  bool wraps_y = false;
  bool percolates = false;
  ClusterReport cluster_report;
};

bool percolates_under(SpanningRule rule, bool wraps_x, bool wraps_y);

class WrapDetector {
 public:
  WrapDetector(const TorusRegion& region, std::span<const Point> positions);

  /// Processes edge (u, v). Order of calls does not affect the result.
  void add_edge(VertexId u, VertexId v);

  VertexId find(VertexId v);
  bool wraps_x(VertexId v) { return flags_[find(v)] & kWrapX; }
  bool wraps_y(VertexId v) { return flags_[find(v)] & kWrapY; }

 private:
  static constexpr std::uint8_t kWrapX = 1;
  static constexpr std::uint8_t kWrapY = 2;

  TorusRegion region_;
  std::span<const Point> positions_;
  double tolerance_;
  std::vector<VertexId> parent_;
  std::vector<std::uint32_t> size_;
  // Unwrapped position of v minus unwrapped position of parent_[v].
  std::vector<Point> offset_;
  std::vector<std::uint8_t> flags_;
  std::vector<VertexId> path_;
};

/// Wrap verdict and cluster statistics for the subgraph induced on the
/// susceptible vertices, from a single union-find pass.
PercolationOutcome detect_spanning(const AdjacencyGraph& graph,
                                   const DeviceSet& devices,
                                   std::span<const std::uint8_t> susceptible,
                                   SpanningRule rule);

/// Same pass as detect_spanning; returns only the statistics.
ClusterReport cluster_stats(const AdjacencyGraph& graph,
                            std::span<const std::uint8_t> susceptible);

}  // namespace spatialfw
