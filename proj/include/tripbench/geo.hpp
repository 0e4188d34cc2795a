#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tripbench/errors.hpp"

namespace tripbench {

inline constexpr double kEarthRadiusKm = 6371.0088;

// A WGS84-style coordinate pair in degrees. Pool ingestion enforces the
// [-90, 90] / [-180, 180] ranges; distance routines only require finiteness.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoPoint& a, const GeoPoint& b) {
    return a.lat == b.lat && a.lon == b.lon;
  }
};

inline bool finite(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon);
}

inline double deg2rad(double deg) {
  return deg * (3.14159265358979323846 / 180.0);
}

// Great-circle distance in kilometers.
inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  if (!finite(a) || !finite(b)) {
    throw InvalidInputError("haversine_km: non-finite coordinate");
  }
  const double lat1 = deg2rad(a.lat);
  const double lat2 = deg2rad(b.lat);
  const double dlat = deg2rad(b.lat - a.lat);
  const double dlon = deg2rad(b.lon - a.lon);
  const double u = std::sin(dlat / 2.0);
  const double v = std::sin(dlon / 2.0);
  double s = u * u + std::cos(lat1) * std::cos(lat2) * v * v;
  // Guard rounding at the antipodal boundary.
  if (s > 1.0) s = 1.0;
  if (s < 0.0) s = 0.0;
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(s));
}

// Symmetric pairwise great-circle distances over an ordered point list.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(std::vector<GeoPoint> points) : points_(std::move(points)) {
    const std::size_t n = points_.size();
    d_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double km = haversine_km(points_[i], points_[j]);
        d_[i * n + j] = km;
        d_[j * n + i] = km;
      }
    }
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<GeoPoint>& points() const { return points_; }

  double operator()(std::size_t i, std::size_t j) const {
    return d_[i * points_.size() + j];
  }

 private:
  std::vector<GeoPoint> points_;
  std::vector<double> d_;
};

inline DistanceMatrix build_distance_matrix(std::vector<GeoPoint> points) {
  if (points.empty()) {
    throw InvalidInputError("build_distance_matrix: empty point list");
  }
  return DistanceMatrix(std::move(points));
}

}  // namespace tripbench
