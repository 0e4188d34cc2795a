#pragma once

// Independent reference computations used as test oracles. These deliberately
// avoid the library's solver code paths: routes are enumerated day by day and
// summed left to right, spanning trees are enumerated via Prufer sequences.

#include <limits>
#include <vector>

#include "tripbench/geo.hpp"
#include "tripbench/rng.hpp"
#include "tripbench/solvers.hpp"

namespace oracle {

using tripbench::DistanceMatrix;
using tripbench::GeoPoint;
using tripbench::Rng;
using tripbench::RouteInstance;

namespace detail {

inline void route_rec(const RouteInstance& inst, std::size_t day, int pos_in_day,
                      int current_is_hotel, std::size_t current_attr, double acc,
                      std::uint32_t used, double& best) {
  if (acc >= best) return;  // cost-based pruning never discards an optimum
  const std::size_t days = inst.days();
  if (day == days) {
    best = acc;
    return;
  }
  const int quota = inst.per_day_quota[day];
  if (pos_in_day == quota) {
    // close the day at its own hotel, open the next day at that day's hotel
    const double back = inst.hotel_to_attr(day, current_attr);
    route_rec(inst, day + 1, 0, 1, 0, acc + back, used, best);
    return;
  }
  for (std::size_t j = 0; j < inst.attraction_count(); ++j) {
    if (used & (1u << j)) continue;
    const double leg = current_is_hotel ? inst.hotel_to_attr(day, j)
                                        : inst.attr_to_attr(current_attr, j);
    route_rec(inst, day, pos_in_day + 1, 0, j, acc + leg, used | (1u << j), best);
  }
}

}  // namespace detail

// Minimum multi-day route cost by exhaustive enumeration of ordered day
// assignments.
inline double brute_force_route(const RouteInstance& inst) {
  double best = std::numeric_limits<double>::infinity();
  detail::route_rec(inst, 0, 0, 1, 0, 0.0, 0, best);
  return best;
}

// Minimum completion cost given a fixed visit prefix (attraction indices).
inline double brute_force_completion(const RouteInstance& inst, const std::vector<int>& prefix) {
  double best = std::numeric_limits<double>::infinity();
  if (prefix.empty()) {
    detail::route_rec(inst, 0, 0, 1, 0, 0.0, 0, best);
    return best;
  }
  std::uint32_t used = 0;
  std::size_t day = 0;
  int pos = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    used |= (1u << prefix[i]);
    ++pos;
    if (pos == inst.per_day_quota[day] && i + 1 < prefix.size()) {
      ++day;
      pos = 0;
    }
  }
  const std::size_t last = static_cast<std::size_t>(prefix.back());
  if (pos == inst.per_day_quota[day]) {
    const double back = inst.hotel_to_attr(day, last);
    detail::route_rec(inst, day + 1, 0, 1, 0, back, used, best);
  } else {
    detail::route_rec(inst, day, pos, 0, last, 0.0, used, best);
  }
  return best;
}

// Minimum spanning tree weight by enumerating every labeled tree on the node
// set (Prufer decoding); practical for up to ~8 nodes.
inline double prufer_mst_min(const DistanceMatrix& matrix, const std::vector<std::size_t>& nodes) {
  const std::size_t m = nodes.size();
  if (m <= 1) return 0.0;
  if (m == 2) return matrix(nodes[0], nodes[1]);
  const std::size_t seq_len = m - 2;
  std::vector<std::size_t> prufer(seq_len, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    // decode: degree = multiplicity + 1
    std::vector<int> degree(m, 1);
    for (std::size_t v : prufer) degree[v]++;
    double weight = 0.0;
    std::vector<int> deg = degree;
    std::vector<bool> done(m, false);
    for (std::size_t i = 0; i < seq_len; ++i) {
      std::size_t leaf = m;
      for (std::size_t v = 0; v < m; ++v) {
        if (!done[v] && deg[v] == 1) {
          leaf = v;
          break;
        }
      }
      weight += matrix(nodes[leaf], nodes[prufer[i]]);
      done[leaf] = true;
      deg[prufer[i]]--;
      deg[leaf]--;
    }
    std::size_t u = m;
    std::size_t v = m;
    for (std::size_t w = 0; w < m; ++w) {
      if (!done[w] && deg[w] == 1) {
        if (u == m) {
          u = w;
        } else {
          v = w;
        }
      }
    }
    weight += matrix(nodes[u], nodes[v]);
    best = std::min(best, weight);

    // next Prufer sequence
    std::size_t at = 0;
    while (at < seq_len && prufer[at] == m - 1) {
      prufer[at] = 0;
      ++at;
    }
    if (at == seq_len) break;
    prufer[at]++;
  }
  return best;
}

inline GeoPoint random_city_point(Rng& rng) {
  return {39.9 + tripbench::uniform_unit(rng) * 0.2, -75.3 + tripbench::uniform_unit(rng) * 0.3};
}

// Random instance with n attractions split over `days` days (each day at
// least one), distinct hotels allowed per day.
inline RouteInstance random_instance(Rng& rng, int n, int days) {
  std::vector<int> quota(static_cast<std::size_t>(days), 1);
  for (int extra = n - days; extra > 0; --extra) {
    quota[tripbench::uniform_index(rng, static_cast<std::size_t>(days))]++;
  }
  std::vector<GeoPoint> hotels;
  for (int d = 0; d < days; ++d) hotels.push_back(random_city_point(rng));
  std::vector<GeoPoint> attractions;
  for (int i = 0; i < n; ++i) attractions.push_back(random_city_point(rng));
  return RouteInstance::build(std::move(hotels), std::move(attractions), std::move(quota));
}

}  // namespace oracle
