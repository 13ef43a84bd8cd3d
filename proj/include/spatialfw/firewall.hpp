// Firewall selection strategies and secured-zone removal.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spatialfw/rgg.hpp"
#include "spatialfw/spatial_domain.hpp"

namespace spatialfw {

enum class PolicyKind { Random, DegreeAware, RandomDC, DegreeAwareDC };

struct FirewallPolicy {
  PolicyKind kind = PolicyKind::Random;
  /// Minimum pairwise firewall distance in meters. Only used by the DC kinds.
  double min_distance = 0.0;

  bool distance_constrained() const {
    return kind == PolicyKind::RandomDC || kind == PolicyKind::DegreeAwareDC;
  }

  /// Throws std::invalid_argument if a DC kind has min_distance <= 0.
  void validate() const;

  friend bool operator==(const FirewallPolicy&, const FirewallPolicy&) = default;
};

/// "random", "degree", "random-dc", "degree-dc".
std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

struct FirewallSelection {
  std::vector<VertexId> firewall_ids;
  /// The distance constraint could not be met for every firewall and the
  /// remainder was filled from rejected candidates.
  bool dc_relaxed = false;
};

/// round-half-up(fraction * n).
std::size_t firewall_count(double fraction, std::size_t n);

/// Picks round(fraction * N) firewalls. Degrees come from the full graph.
/// Ties in degree go to the lower index. Throws std::invalid_argument when
/// fraction is outside [0, 1] or graph and devices disagree.
FirewallSelection select_firewalls(const AdjacencyGraph& graph,
                                   const DeviceSet& devices,
                                   const FirewallPolicy& policy,
                                   double fraction, std::uint64_t seed);

struct QuarantineLayout {
  std::vector<VertexId> firewall_ids;
  Mask protected_mask;
  Mask susceptible;
  double zone_radius = 0.0;
  bool dc_relaxed = false;

  std::size_t protected_count() const;
  std::size_t susceptible_count() const;
};

/// Marks every device within zone_radius (inclusive) of a firewall as
/// protected. Throws std::invalid_argument on a bad id or a radius outside
/// (0, side_length / 2].
QuarantineLayout apply_secured_zones(const DeviceSet& devices,
                                     std::span<const VertexId> firewall_ids,
                                     double zone_radius);

/// CSV: id,x,y,firewall,protected
void write_layout_csv(const std::string& path, const DeviceSet& devices,
                      const QuarantineLayout& layout);

}  // namespace spatialfw
