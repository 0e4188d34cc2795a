#pragma once

// GeoJSON emission for a scored plan: one LineString per day's route,
// one Point per referenced POI, and a convex hull per spatial cluster.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/clustering.hpp"
#include "tripbench/plan_model.hpp"

namespace tripbench {

namespace detail {

inline nlohmann::json coords(const GeoPoint& p) {
  return nlohmann::json::array({p.lon, p.lat});  // GeoJSON order
}

// Andrew monotone chain; returns hull vertices in counter-clockwise order.
inline std::vector<GeoPoint> convex_hull(std::vector<GeoPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const GeoPoint& a, const GeoPoint& b) {
    return a.lon < b.lon || (a.lon == b.lon && a.lat < b.lat);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  auto cross = [](const GeoPoint& o, const GeoPoint& a, const GeoPoint& b) {
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
  };
  std::vector<GeoPoint> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

inline const char* day_color(std::size_t day) {
  static const char* palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf"};
  return palette[day % 7];
}

}  // namespace detail

// The plan must already be resolved against `pool` (check_failures).
inline nlohmann::json plan_geojson(const Itinerary& plan, const BusinessPool& pool,
                                   std::uint64_t kmeans_seed = 0) {
  nlohmann::json features = nlohmann::json::array();

  auto lookup = [&](const SlotEntry& e) -> const Business* {
    return e.resolved ? pool.find_id(*e.resolved) : nullptr;
  };

  // day routes
  for (std::size_t d = 0; d < plan.days.size(); ++d) {
    const auto& day = plan.days[d];
    const Business* hotel = lookup(day.accommodation);
    if (!hotel) continue;
    nlohmann::json line = nlohmann::json::array();
    line.push_back(detail::coords(hotel->location));
    int stops = 0;
    for (const auto* e : day.attraction_sequence()) {
      const Business* b = lookup(*e);
      if (!b) continue;
      line.push_back(detail::coords(b->location));
      ++stops;
    }
    if (stops == 0) continue;
    line.push_back(detail::coords(hotel->location));
    features.push_back(nlohmann::json{
        {"type", "Feature"},
        {"geometry", {{"type", "LineString"}, {"coordinates", line}}},
        {"properties",
         {{"role", "day_route"}, {"day", d + 1}, {"stroke", detail::day_color(d)}}}});
  }

  // one point per referenced POI
  std::set<std::string> seen;
  std::vector<Business> clusterable;
  for (std::size_t d = 0; d < plan.days.size(); ++d) {
    const auto& day = plan.days[d];
    std::vector<std::pair<const SlotEntry*, const char*>> slots = {
        {&day.accommodation, "accommodation"},
        {&day.breakfast, "breakfast"},
        {&day.lunch, "lunch"},
        {&day.dinner, "dinner"}};
    for (const auto* e : day.attraction_sequence()) slots.push_back({e, "attraction"});
    for (const auto& [entry, slot] : slots) {
      const Business* b = lookup(*entry);
      if (!b || seen.count(b->id)) continue;
      seen.insert(b->id);
      if (b->category != Category::restaurant) clusterable.push_back(*b);
      features.push_back(nlohmann::json{
          {"type", "Feature"},
          {"geometry", {{"type", "Point"}, {"coordinates", detail::coords(b->location)}}},
          {"properties",
           {{"role", "poi"}, {"name", b->name}, {"category", to_string(b->category)}, {"slot", slot}}}});
    }
  }

  // cluster hulls over the plan's hotels + attractions
  if (!clusterable.empty()) {
    const auto clusters = kmeans_clusters(clusterable, kmeans_seed);
    for (int c = 0; c < clusters.k; ++c) {
      std::vector<GeoPoint> members;
      for (std::size_t i = 0; i < clusterable.size(); ++i) {
        if (clusters.labels[i] == c) members.push_back(clusterable[i].location);
      }
      const auto hull = detail::convex_hull(members);
      if (hull.size() < 3) continue;
      nlohmann::json ring = nlohmann::json::array();
      for (const auto& p : hull) ring.push_back(detail::coords(p));
      ring.push_back(detail::coords(hull.front()));  // close the ring
      features.push_back(nlohmann::json{
          {"type", "Feature"},
          {"geometry", {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}}},
          {"properties", {{"role", "cluster_hull"}, {"cluster", c}, {"stroke", "#2ca02c"}}}});
    }
  }

  return nlohmann::json{{"type", "FeatureCollection"},
                        {"features", features},
                        {"properties",
                         {{"source", to_string(plan.source)}, {"query_ref", plan.query_ref}}}};
}

}  // namespace tripbench
