// Range-based random geometric graph on the torus and connectivity queries.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spatialfw/spatial_domain.hpp"

namespace spatialfw {

using VertexId = std::uint32_t;

/// Per-vertex boolean. uint8_t rather than bool so it can be viewed as a span.
using Mask = std::vector<std::uint8_t>;

/// Uniform bucket grid over the torus with cell side >= the query radius, so
/// a fixed-radius query only needs the 3x3 block of cells around the query.
class GridIndex {
 public:
  GridIndex(const DeviceSet& devices, double min_cell_size);

  std::size_t cells_per_axis() const { return cells_; }
  double cell_size() const { return cell_size_; }

  /// Calls visit(id) for every device within `radius` (inclusive) of p.
  /// Requires radius <= cell_size(). Visits in ascending cell order, and in
  /// ascending id within a cell.
  template <typename Visit>
  void for_each_within(Point p, double radius, Visit&& visit) const;

 private:
  struct AxisCells {
    std::array<std::size_t, 3> cell{};
    std::size_t count = 0;
  };

  std::size_t cell_of(double coord) const;
  /// Distinct cells c-1, c, c+1 (mod cells_); fewer than 3 on tiny grids.
  AxisCells neighbor_axis(std::size_t c) const;

  const DeviceSet* devices_;
  std::size_t cells_;
  double cell_size_;
  std::vector<std::uint32_t> cell_start_;  // CSR offsets, size cells_^2 + 1
  std::vector<VertexId> cell_items_;
};

class AdjacencyGraph {
 public:
  AdjacencyGraph(TorusRegion region, double range,
                 std::vector<std::vector<VertexId>> adjacency);

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  double range() const { return range_; }
  const TorusRegion& region() const { return region_; }

  /// Sorted ascending, no self loops, no duplicates.
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[v]; }
  std::size_t degree(VertexId v) const { return adjacency_[v].size(); }
  std::vector<std::size_t> degrees() const;

 private:
  TorusRegion region_;
  double range_;
  std::vector<std::vector<VertexId>> adjacency_;
  std::size_t edge_count_ = 0;
};

/// Edge iff torus distance <= range. Throws std::invalid_argument unless
/// 0 < range <= side_length / 2.
AdjacencyGraph build_rgg(const DeviceSet& devices, double range);

struct ClusterReport {
  static constexpr std::int32_t kInactive = -1;

  /// Cluster id per vertex, numbered by smallest member index; kInactive for
  /// masked-out vertices.
  std::vector<std::int32_t> labels;
  std::size_t num_clusters = 0;
  /// Sorted descending.
  std::vector<std::size_t> sizes;
  std::size_t max_cluster_size = 0;

  friend bool operator==(const ClusterReport&, const ClusterReport&) = default;
};

/// Components of the subgraph induced on active vertices (union-find).
ClusterReport connected_components(const AdjacencyGraph& graph,
                                   std::span<const std::uint8_t> active);

/// Builds a report from per-vertex root/representative ids. Vertices with
/// kInactive in `roots` are inactive. Shared by the component engines.
ClusterReport make_cluster_report(std::span<const std::int64_t> roots);

/// One "u v" line per undirected edge with u < v, vertices 0-based.
void write_edge_list(std::ostream& out, const AdjacencyGraph& graph);
void write_edge_list(const std::string& path, const AdjacencyGraph& graph);

// ---------------------------------------------------------------------------

template <typename Visit>
void GridIndex::for_each_within(Point p, double radius, Visit&& visit) const {
  const TorusRegion& region = devices_->region();
  const double r2 = radius * radius;
  const auto xs = neighbor_axis(cell_of(p.x));
  const auto ys = neighbor_axis(cell_of(p.y));
  for (std::size_t j = 0; j < ys.count; ++j) {
    for (std::size_t i = 0; i < xs.count; ++i) {
      const std::size_t cell = ys.cell[j] * cells_ + xs.cell[i];
      for (std::uint32_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
        const VertexId id = cell_items_[k];
        if (region.distance_sq(p, (*devices_)[id]) <= r2) visit(id);
      }
    }
  }
}

}  // namespace spatialfw
