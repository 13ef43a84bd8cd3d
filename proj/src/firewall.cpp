#include "spatialfw/firewall.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace spatialfw {

void FirewallPolicy::validate() const {
  if (distance_constrained() && !(min_distance > 0.0 && std::isfinite(min_distance))) {
    throw std::invalid_argument("policy " + std::string(to_string(kind)) +
                                " needs min_distance > 0");
  }
}

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Random: return "random";
    case PolicyKind::DegreeAware: return "degree";
    case PolicyKind::RandomDC: return "random-dc";
    case PolicyKind::DegreeAwareDC: return "degree-dc";
  }
  return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name) {
  for (PolicyKind k : {PolicyKind::Random, PolicyKind::DegreeAware,
                       PolicyKind::RandomDC, PolicyKind::DegreeAwareDC}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::size_t firewall_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
}

namespace {

std::vector<VertexId> shuffled_ids(std::size_t n, Engine& rng) {
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), VertexId{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(ids[i - 1], ids[uniform_index(rng, i)]);
  }
  return ids;
}

std::vector<VertexId> by_descending_degree(const AdjacencyGraph& graph) {
  std::vector<VertexId> ids(graph.vertex_count());
  std::iota(ids.begin(), ids.end(), VertexId{0});
  std::stable_sort(ids.begin(), ids.end(), [&](VertexId a, VertexId b) {
    return graph.degree(a) > graph.degree(b);
  });
  return ids;
}

// Accepted firewalls bucketed on a grid with cell side >= min_distance so a
// conflict check touches at most 3x3 cells.
class SpacingGrid {
 public:
  SpacingGrid(const TorusRegion& region, double min_distance)
      : region_(region), min_sq_(min_distance * min_distance) {
    const double L = region.side_length();
    cells_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(L / min_distance)));
    cell_size_ = L / static_cast<double>(cells_);
    buckets_.resize(cells_ * cells_);
  }

  bool conflicts(Point p) const {
    const std::size_t cx = cell_of(p.x);
    const std::size_t cy = cell_of(p.y);
    const std::size_t span = std::min<std::size_t>(cells_, 3);
    for (std::size_t j = 0; j < span; ++j) {
      for (std::size_t i = 0; i < span; ++i) {
        const std::size_t x = cells_ >= 3 ? (cx + cells_ - 1 + i) % cells_ : i;
        const std::size_t y = cells_ >= 3 ? (cy + cells_ - 1 + j) % cells_ : j;
        for (const Point& q : buckets_[y * cells_ + x]) {
          if (region_.distance_sq(p, q) < min_sq_) return true;
        }
      }
    }
    return false;
  }

  void insert(Point p) { buckets_[cell_of(p.y) * cells_ + cell_of(p.x)].push_back(p); }

 private:
  std::size_t cell_of(double c) const {
    return std::min(static_cast<std::size_t>(c / cell_size_), cells_ - 1);
  }

  TorusRegion region_;
  double min_sq_;
  std::size_t cells_;
  double cell_size_;
  std::vector<std::vector<Point>> buckets_;
};

FirewallSelection greedy_spaced(const std::vector<VertexId>& order,
                                const DeviceSet& devices, double min_distance,
                                std::size_t k) {
  FirewallSelection out;
  out.firewall_ids.reserve(k);
  std::vector<VertexId> rejected;
  SpacingGrid grid(devices.region(), min_distance);
  for (VertexId v : order) {
    if (out.firewall_ids.size() == k) break;
    if (grid.conflicts(devices[v])) {
      rejected.push_back(v);
    } else {
      out.firewall_ids.push_back(v);
      grid.insert(devices[v]);
    }
  }
  if (out.firewall_ids.size() < k) {
    out.dc_relaxed = true;
    const std::size_t missing = k - out.firewall_ids.size();
    out.firewall_ids.insert(out.firewall_ids.end(), rejected.begin(),
                            rejected.begin() + static_cast<std::ptrdiff_t>(missing));
  }
  return out;
}

}  // namespace

FirewallSelection select_firewalls(const AdjacencyGraph& graph,
                                   const DeviceSet& devices,
                                   const FirewallPolicy& policy,
                                   double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("firewall fraction must lie in [0, 1]");
  }
  if (graph.vertex_count() != devices.count()) {
    throw std::invalid_argument("graph and device set sizes differ");
  }
  policy.validate();

  const std::size_t n = devices.count();
  const std::size_t k = firewall_count(fraction, n);
  Engine rng(seed);

  FirewallSelection out;
  switch (policy.kind) {
    case PolicyKind::Random: {
      // Partial Fisher-Yates: the first k slots are a uniform k-subset.
      std::vector<VertexId> ids(n);
      std::iota(ids.begin(), ids.end(), VertexId{0});
      for (std::size_t i = 0; i < k; ++i) {
        std::swap(ids[i], ids[i + uniform_index(rng, n - i)]);
      }
      ids.resize(k);
      out.firewall_ids = std::move(ids);
      break;
    }
    case PolicyKind::DegreeAware: {
      auto ids = by_descending_degree(graph);
      ids.resize(k);
      out.firewall_ids = std::move(ids);
      break;
    }
    case PolicyKind::RandomDC:
      out = greedy_spaced(shuffled_ids(n, rng), devices, policy.min_distance, k);
      break;
    case PolicyKind::DegreeAwareDC:
      out = greedy_spaced(by_descending_degree(graph), devices, policy.min_distance, k);
      break;
  }
  return out;
}

std::size_t QuarantineLayout::protected_count() const {
  return static_cast<std::size_t>(std::count(protected_mask.begin(), protected_mask.end(), 1));
}

std::size_t QuarantineLayout::susceptible_count() const {
  return static_cast<std::size_t>(std::count(susceptible.begin(), susceptible.end(), 1));
}

QuarantineLayout apply_secured_zones(const DeviceSet& devices,
                                     std::span<const VertexId> firewall_ids,
                                     double zone_radius) {
  if (!(zone_radius > 0.0) || zone_radius > 0.5 * devices.region().side_length()) {
    throw std::invalid_argument("zone radius must lie in (0, side_length / 2]");
  }
  QuarantineLayout layout;
  layout.zone_radius = zone_radius;
  layout.firewall_ids.assign(firewall_ids.begin(), firewall_ids.end());
  layout.protected_mask.assign(devices.count(), 0);

  const GridIndex index(devices, zone_radius);
  for (VertexId f : firewall_ids) {
    if (f >= devices.count()) throw std::invalid_argument("firewall id out of range");
    layout.protected_mask[f] = 1;
    index.for_each_within(devices[f], zone_radius,
                          [&](VertexId v) { layout.protected_mask[v] = 1; });
  }
  layout.susceptible.resize(devices.count());
  for (std::size_t v = 0; v < devices.count(); ++v) {
    layout.susceptible[v] = layout.protected_mask[v] ? 0 : 1;
  }
  return layout;
}

void write_layout_csv(const std::string& path, const DeviceSet& devices,
                      const QuarantineLayout& layout) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  std::vector<std::uint8_t> is_firewall(devices.count(), 0);
  for (VertexId f : layout.firewall_ids) is_firewall[f] = 1;
  out.precision(17);
  out << "id,x,y,firewall,protected\n";
  for (std::size_t v = 0; v < devices.count(); ++v) {
    out << v << ',' << devices[v].x << ',' << devices[v].y << ','
        << int(is_firewall[v]) << ',' << int(layout.protected_mask[v]) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace spatialfw
