#include "spatialfw/spatial_domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace spatialfw {

TorusRegion::TorusRegion(double side_length) : side_(side_length) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw std::invalid_argument("side_length must be finite and > 0, got " +
                                std::to_string(side_length));
  }
}

Point TorusRegion::normalize(Point p) const {
  auto wrap = [this](double v) {
    double r = std::fmod(v, side_);
    if (r < 0.0) r += side_;
    if (r >= side_) r = 0.0;  // fmod of a tiny negative can round up to L
    return r;
  };
  return {wrap(p.x), wrap(p.y)};
}

double TorusRegion::wrap_delta(double d) const {
  const double half = 0.5 * side_;
  if (d > half) return d - side_;
  if (d <= -half) return d + side_;
  return d;
}

Point TorusRegion::displacement(Point p, Point q) const {
  return {wrap_delta(q.x - p.x), wrap_delta(q.y - p.y)};
}

double TorusRegion::distance_sq(Point p, Point q) const {
  double dx = std::abs(p.x - q.x);
  double dy = std::abs(p.y - q.y);
  dx = std::min(dx, side_ - dx);
  dy = std::min(dy, side_ - dy);
  return dx * dx + dy * dy;
}

double TorusRegion::distance(Point p, Point q) const {
  return std::sqrt(distance_sq(p, q));
}

double torus_distance(Point p, Point q, const TorusRegion& region) {
  return region.distance(p, q);
}

DeviceSet::DeviceSet(TorusRegion region, std::vector<Point> positions)
    : region_(region), positions_(std::move(positions)) {
  for (const Point& p : positions_) {
    if (!(p.x >= 0.0 && p.x < region_.side_length() && p.y >= 0.0 &&
          p.y < region_.side_length())) {
      throw std::invalid_argument("device position outside the region");
    }
  }
}

DeviceSet sample_ppp(const TorusRegion& region, double intensity_per_km2,
                     std::uint64_t seed) {
  if (!(intensity_per_km2 >= 0.0) || !std::isfinite(intensity_per_km2)) {
    throw std::invalid_argument("intensity must be finite and >= 0");
  }
  Engine rng(seed);
  const auto n = poisson(rng, intensity_per_km2 * region.area_km2());
  std::vector<Point> pts;
  pts.reserve(n);
  const double L = region.side_length();
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = uniform01(rng) * L;
    const double y = uniform01(rng) * L;
    pts.push_back(region.normalize({x, y}));
  }
  return DeviceSet(region, std::move(pts));
}

}  // namespace spatialfw
