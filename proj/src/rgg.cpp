#include "spatialfw/rgg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "spatialfw/union_find.hpp"

namespace spatialfw {

GridIndex::GridIndex(const DeviceSet& devices, double min_cell_size)
    : devices_(&devices) {
  const double L = devices.region().side_length();
  if (!(min_cell_size > 0.0)) {
    throw std::invalid_argument("grid cell size must be > 0");
  }
  cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(L / min_cell_size)));
  cell_size_ = L / static_cast<double>(cells_);

  const std::size_t n_cells = cells_ * cells_;
  std::vector<std::size_t> cell_ids(devices.count());
  cell_start_.assign(n_cells + 1, 0);
  for (std::size_t i = 0; i < devices.count(); ++i) {
    const Point& p = devices[i];
    cell_ids[i] = cell_of(p.y) * cells_ + cell_of(p.x);
    ++cell_start_[cell_ids[i] + 1];
  }
  for (std::size_t c = 0; c < n_cells; ++c) cell_start_[c + 1] += cell_start_[c];

  // Counting sort keeps ids ascending inside each cell.
  cell_items_.resize(devices.count());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < devices.count(); ++i) {
    cell_items_[fill[cell_ids[i]]++] = static_cast<VertexId>(i);
  }
}

std::size_t GridIndex::cell_of(double coord) const {
  const auto c = static_cast<std::size_t>(coord / cell_size_);
  return std::min(c, cells_ - 1);
}

GridIndex::AxisCells GridIndex::neighbor_axis(std::size_t c) const {
  AxisCells out;
  if (cells_ >= 3) {
    out.cell = {(c + cells_ - 1) % cells_, c, (c + 1) % cells_};
    out.count = 3;
  } else {
    for (std::size_t i = 0; i < cells_; ++i) out.cell[i] = i;
    out.count = cells_;
  }
  return out;
}

AdjacencyGraph::AdjacencyGraph(TorusRegion region, double range,
                               std::vector<std::vector<VertexId>> adjacency)
    : region_(region), range_(range), adjacency_(std::move(adjacency)) {
  std::size_t twice_edges = 0;
  for (const auto& nbrs : adjacency_) twice_edges += nbrs.size();
  edge_count_ = twice_edges / 2;
}

std::vector<std::size_t> AdjacencyGraph::degrees() const {
  std::vector<std::size_t> d(adjacency_.size());
  for (std::size_t v = 0; v < adjacency_.size(); ++v) d[v] = adjacency_[v].size();
  return d;
}

AdjacencyGraph build_rgg(const DeviceSet& devices, double range) {
  const double L = devices.region().side_length();
  if (!(range > 0.0) || !std::isfinite(range)) {
    throw std::invalid_argument("communication range must be > 0");
  }
  if (range > 0.5 * L) {
    throw std::invalid_argument(
        "communication range exceeds half the side length (wrap ambiguity)");
  }

  const GridIndex index(devices, range);
  std::vector<std::vector<VertexId>> adj(devices.count());
  for (std::size_t u = 0; u < devices.count(); ++u) {
    index.for_each_within(devices[u], range, [&](VertexId v) {
      if (v > u) {
        adj[u].push_back(v);
        adj[v].push_back(static_cast<VertexId>(u));
      }
    });
  }
  for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  return AdjacencyGraph(devices.region(), range, std::move(adj));
}

ClusterReport make_cluster_report(std::span<const std::int64_t> roots) {
  ClusterReport report;
  report.labels.assign(roots.size(), ClusterReport::kInactive);
  std::map<std::int64_t, std::int32_t> id_of_root;
  for (std::size_t v = 0; v < roots.size(); ++v) {
    if (roots[v] == ClusterReport::kInactive) continue;
    auto [it, inserted] =
        id_of_root.try_emplace(roots[v], static_cast<std::int32_t>(report.sizes.size()));
    if (inserted) report.sizes.push_back(0);
    report.labels[v] = it->second;
    ++report.sizes[static_cast<std::size_t>(it->second)];
  }
  report.num_clusters = report.sizes.size();
  std::sort(report.sizes.begin(), report.sizes.end(), std::greater<>());
  report.max_cluster_size = report.sizes.empty() ? 0 : report.sizes.front();
  return report;
}

ClusterReport connected_components(const AdjacencyGraph& graph,
                                   std::span<const std::uint8_t> active) {
  const std::size_t n = graph.vertex_count();
  if (active.size() != n) {
    throw std::invalid_argument("mask length does not match vertex count");
  }
  UnionFind uf(n);
  for (VertexId u = 0; u < n; ++u) {
    if (!active[u]) continue;
    for (VertexId v : graph.neighbors(u)) {
      if (v > u && active[v]) uf.unite(u, v);
    }
  }
  std::vector<std::int64_t> roots(n, ClusterReport::kInactive);
  for (VertexId v = 0; v < n; ++v) {
    if (active[v]) roots[v] = uf.find(v);
  }
  return make_cluster_report(roots);
}

void write_edge_list(std::ostream& out, const AdjacencyGraph& graph) {
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (VertexId v : graph.neighbors(u)) {
      if (u < v) out << u << ' ' << v << '\n';
    }
  }
}

void write_edge_list(const std::string& path, const AdjacencyGraph& graph) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_edge_list(out, graph);
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace spatialfw
