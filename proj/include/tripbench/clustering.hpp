#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tripbench/dataset.hpp"
#include "tripbench/geo.hpp"
#include "tripbench/rng.hpp"

namespace tripbench {

struct ClusterAssignment {
  int k = 1;
  std::vector<GeoPoint> centroids;
  std::vector<int> labels;                 // aligned with the input item order
  std::map<std::string, int> labels_by_id; // business id -> cluster index
  std::vector<double> objective_history;   // Lloyd objective after each assignment pass
};

// Cluster count rule: the item count divided by 5, floored, at least 1.
inline int cluster_count_for(std::size_t n) {
  return std::max<int>(1, static_cast<int>(n / 5));
}

namespace detail {

inline double sq_deg_dist(const GeoPoint& a, const GeoPoint& b) {
  const double dlat = a.lat - b.lat;
  const double dlon = a.lon - b.lon;
  return dlat * dlat + dlon * dlon;
}

}  // namespace detail

// Lloyd's algorithm with k-means++ seeding over raw (lat, lon) pairs.
// Deterministic for a fixed seed; runs to a label fixpoint or 300 iterations.
inline ClusterAssignment kmeans_points(const std::vector<GeoPoint>& points, std::uint64_t seed,
                                       int k = -1) {
  if (points.empty()) throw InvalidInputError("kmeans: no points");
  const std::size_t n = points.size();
  if (k <= 0) k = cluster_count_for(n);
  k = std::min<int>(k, static_cast<int>(n));

  Rng rng(seed);
  ClusterAssignment out;
  out.k = k;

  // k-means++ seeding
  std::vector<GeoPoint> centroids;
  centroids.push_back(points[uniform_index(rng, n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centroids.size()) < k) {
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : centroids) best = std::min(best, detail::sq_deg_dist(points[i], c));
      d2[i] = best;
    }
    centroids.push_back(points[weighted_index(rng, d2)]);
  }

  std::vector<int> labels(n, -1);
  auto assign = [&]() {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best_c = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = detail::sq_deg_dist(points[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      if (labels[i] != best_c) {
        labels[i] = best_c;
        changed = true;
      }
      objective += best_d;
    }
    out.objective_history.push_back(objective);
    return changed;
  };

  assign();
  for (int iter = 0; iter < 300; ++iter) {
    // centroid update
    std::vector<double> lat_sum(k, 0.0), lon_sum(k, 0.0);
    std::vector<int> count(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      lat_sum[labels[i]] += points[i].lat;
      lon_sum[labels[i]] += points[i].lon;
      count[labels[i]]++;
    }
    for (int c = 0; c < k; ++c) {
      if (count[c] > 0) {
        centroids[c] = {lat_sum[c] / count[c], lon_sum[c] / count[c]};
      } else {
        // reseed an empty cluster with the point farthest from its centroid
        std::size_t far_i = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = detail::sq_deg_dist(points[i], centroids[labels[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        centroids[c] = points[far_i];
      }
    }
    if (!assign()) break;
  }

  out.centroids = std::move(centroids);
  out.labels = std::move(labels);
  return out;
}

// Cluster businesses on their coordinates; k follows the floor(n/5) rule.
inline ClusterAssignment kmeans_clusters(const std::vector<Business>& items, std::uint64_t seed) {
  std::vector<GeoPoint> points;
  points.reserve(items.size());
  for (const auto& b : items) points.push_back(b.location);
  auto out = kmeans_points(points, seed);
  for (std::size_t i = 0; i < items.size(); ++i) out.labels_by_id[items[i].id] = out.labels[i];
  return out;
}

// One line per cluster, members sorted by name.
inline std::string cluster_summary_text(const ClusterAssignment& a, const std::vector<Business>& items) {
  if (a.labels.size() != items.size()) {
    throw InvalidInputError("cluster_summary_text: labels do not cover items");
  }
  std::vector<std::vector<std::string>> names(static_cast<std::size_t>(a.k));
  for (std::size_t i = 0; i < items.size(); ++i) {
    names[static_cast<std::size_t>(a.labels[i])].push_back(items[i].name);
  }
  std::ostringstream out;
  for (int c = 0; c < a.k; ++c) {
    auto& member = names[static_cast<std::size_t>(c)];
    std::sort(member.begin(), member.end());
    if (c > 0) out << "\n";
    out << "Cluster " << c << ": ";
    for (std::size_t i = 0; i < member.size(); ++i) {
      if (i > 0) out << ", ";
      out << member[i];
    }
  }
  return out.str();
}

}  // namespace tripbench
