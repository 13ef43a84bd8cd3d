// Wrap-around simulation region, Poisson point process sampling and
// toroidal geometry.
//
// All lengths are meters. Intensities are given in devices per km^2 and
// converted once, in sample_ppp.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spatialfw/random.hpp"

namespace spatialfw {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Square region [0, side_length)^2 with periodic boundaries.
class TorusRegion {
 public:
  /// Throws std::invalid_argument unless side_length is finite and > 0.
  explicit TorusRegion(double side_length);

  double side_length() const { return side_; }
  double area_km2() const { return side_ * side_ * 1e-6; }

  /// Maps any finite point into [0, side_length)^2.
  Point normalize(Point p) const;

  /// Minimal-image difference q - p, each component in (-L/2, L/2].
  Point displacement(Point p, Point q) const;

  /// Euclidean distance on the torus between normalized points.
  double distance(Point p, Point q) const;

  /// Squared torus distance; avoids the sqrt for threshold tests.
  double distance_sq(Point p, Point q) const;

  friend bool operator==(const TorusRegion&, const TorusRegion&) = default;

 private:
  double wrap_delta(double d) const;

  double side_;
};

/// One realization of the device point process. Device identity is the
/// index into positions().
class DeviceSet {
 public:
  DeviceSet(TorusRegion region, std::vector<Point> positions);

  const TorusRegion& region() const { return region_; }
  std::span<const Point> positions() const { return positions_; }
  const Point& operator[](std::size_t id) const { return positions_[id]; }
  std::size_t count() const { return positions_.size(); }

 private:
  TorusRegion region_;
  std::vector<Point> positions_;
};

double torus_distance(Point p, Point q, const TorusRegion& region);

/// Homogeneous PPP on the torus. Bit-for-bit reproducible per
/// (region, intensity, seed). Throws std::invalid_argument on a negative or
/// non-finite intensity.
DeviceSet sample_ppp(const TorusRegion& region, double intensity_per_km2,
                     std::uint64_t seed);

}  // namespace spatialfw
