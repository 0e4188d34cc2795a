#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <vector>

#include "tripbench/dataset.hpp"
#include "tripbench/geo.hpp"
#include "tripbench/plan_model.hpp"
#include "tripbench/querygen.hpp"

namespace tripbench {

inline constexpr int kDefaultNodeCap = 20;

// A multi-day routing problem: each day starts and ends at that day's hotel
// and visits its quota of attractions; the attraction-to-day assignment is
// free as long as quotas are met. Matrix layout: day hotels first (index =
// day), then attractions (index = days + i).
struct RouteInstance {
  std::vector<GeoPoint> day_hotels;
  std::vector<GeoPoint> attractions;
  std::vector<int> per_day_quota;
  DistanceMatrix matrix;

  std::size_t days() const { return day_hotels.size(); }
  std::size_t attraction_count() const { return attractions.size(); }

  double hotel_to_attr(std::size_t day, std::size_t attr) const {
    return matrix(day, days() + attr);
  }
  double attr_to_attr(std::size_t a, std::size_t b) const {
    return matrix(days() + a, days() + b);
  }

  static RouteInstance build(std::vector<GeoPoint> day_hotels, std::vector<GeoPoint> attractions,
                             std::vector<int> per_day_quota, int node_cap = kDefaultNodeCap) {
    if (day_hotels.empty()) throw InvalidInputError("route instance: no days");
    if (per_day_quota.size() != day_hotels.size()) {
      throw InvalidInputError("route instance: quota list must match day count");
    }
    int total = 0;
    for (int q : per_day_quota) {
      if (q < 1) throw InvalidInputError("route instance: every day needs at least one attraction");
      total += q;
    }
    if (total != static_cast<int>(attractions.size())) {
      throw InvalidInputError("route instance: quotas must partition the attraction set");
    }
    if (static_cast<int>(attractions.size()) > node_cap) {
      throw InfeasibleSizeError("route instance: " + std::to_string(attractions.size()) +
                                " attractions exceed the node cap of " + std::to_string(node_cap));
    }
    RouteInstance inst;
    std::vector<GeoPoint> pts = day_hotels;
    pts.insert(pts.end(), attractions.begin(), attractions.end());
    inst.matrix = build_distance_matrix(std::move(pts));
    inst.day_hotels = std::move(day_hotels);
    inst.attractions = std::move(attractions);
    inst.per_day_quota = std::move(per_day_quota);
    return inst;
  }
};

struct RouteSolution {
  double total_km = 0.0;
  std::vector<std::vector<int>> day_orders;  // attraction indices per day
  bool optimal = false;
  std::size_t nodes_expanded = 0;
};

namespace detail {

// Legs are accumulated in ascending order so that routes sharing a leg
// multiset (e.g. a day tour and its reversal) produce bit-identical totals.
inline double leg_sum(std::vector<double>& legs) {
  std::sort(legs.begin(), legs.end());
  double total = 0.0;
  for (double leg : legs) total += leg;
  return total;
}

inline double day_cost(const RouteInstance& inst, std::size_t day, const std::vector<int>& order) {
  std::vector<double> legs;
  legs.reserve(order.size() + 1);
  legs.push_back(inst.hotel_to_attr(day, static_cast<std::size_t>(order.front())));
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    legs.push_back(inst.attr_to_attr(static_cast<std::size_t>(order[i]),
                                     static_cast<std::size_t>(order[i + 1])));
  }
  legs.push_back(inst.hotel_to_attr(day, static_cast<std::size_t>(order.back())));
  return leg_sum(legs);
}

}  // namespace detail

// Total distance of a stated routing: per day, hotel -> attractions in order
// -> same hotel. The orders must partition the attraction set and respect the
// per-day quotas.
inline double route_distance(const RouteInstance& inst, const std::vector<std::vector<int>>& day_orders) {
  if (day_orders.size() != inst.days()) {
    throw InvalidRouteError("route_distance: day count mismatch");
  }
  std::vector<bool> seen(inst.attraction_count(), false);
  for (std::size_t d = 0; d < day_orders.size(); ++d) {
    if (static_cast<int>(day_orders[d].size()) != inst.per_day_quota[d]) {
      throw InvalidRouteError("route_distance: day " + std::to_string(d + 1) + " violates its quota");
    }
    for (int a : day_orders[d]) {
      if (a < 0 || a >= static_cast<int>(inst.attraction_count())) {
        throw InvalidRouteError("route_distance: attraction index out of range");
      }
      if (seen[static_cast<std::size_t>(a)]) {
        throw InvalidRouteError("route_distance: attraction visited twice");
      }
      seen[static_cast<std::size_t>(a)] = true;
    }
  }
  double total = 0.0;
  for (std::size_t d = 0; d < day_orders.size(); ++d) {
    total += detail::day_cost(inst, d, day_orders[d]);
  }
  return total;
}

namespace detail {

// Prim's algorithm over an implicit complete graph given by `cost`.
template <typename CostFn>
double prim_mst(std::size_t n, CostFn cost) {
  if (n <= 1) return 0.0;
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<bool> in_tree(n, false);
  best[0] = 0.0;
  double total = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_tree[i] && (pick == n || best[i] < best[pick])) pick = i;
    }
    in_tree[pick] = true;
    total += best[pick];
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_tree[i]) best[i] = std::min(best[i], cost(pick, i));
    }
  }
  return total;
}

}  // namespace detail

// Minimum spanning tree weight over a subset of matrix indices; 0 for fewer
// than two nodes.
inline double mst_lower_bound(const DistanceMatrix& matrix, const std::vector<std::size_t>& nodes) {
  for (std::size_t i : nodes) {
    if (i >= matrix.size()) throw InvalidInputError("mst_lower_bound: node index out of range");
  }
  return detail::prim_mst(nodes.size(),
                          [&](std::size_t a, std::size_t b) { return matrix(nodes[a], nodes[b]); });
}

namespace detail {

// Shared bookkeeping for the exact solvers: which day the c-th visit belongs
// to (1-based visit counts).
struct DaySchedule {
  std::vector<int> day_at;  // day_at[c] for c in 1..n
  int days = 0;

  explicit DaySchedule(const std::vector<int>& quotas) {
    days = static_cast<int>(quotas.size());
    day_at.assign(1, 0);
    for (int d = 0; d < days; ++d) {
      for (int k = 0; k < quotas[static_cast<std::size_t>(d)]; ++k) day_at.push_back(d);
    }
  }
};

// Cost of moving from attraction `last` (visit number c) to attraction `next`
// (visit number c+1): a plain leg within a day, or close out the old day at
// its hotel and depart from the next day's hotel.
inline double transition_cost(const RouteInstance& inst, const DaySchedule& sched, int c, int last,
                              int next) {
  const int d_cur = sched.day_at[static_cast<std::size_t>(c)];
  const int d_next = sched.day_at[static_cast<std::size_t>(c + 1)];
  if (d_cur == d_next) {
    return inst.attr_to_attr(static_cast<std::size_t>(last), static_cast<std::size_t>(next));
  }
  return inst.hotel_to_attr(static_cast<std::size_t>(d_cur), static_cast<std::size_t>(last)) +
         inst.hotel_to_attr(static_cast<std::size_t>(d_next), static_cast<std::size_t>(next));
}

inline std::vector<std::vector<int>> split_by_quota(const std::vector<int>& sequence,
                                                    const std::vector<int>& quotas) {
  std::vector<std::vector<int>> orders;
  std::size_t at = 0;
  for (int q : quotas) {
    orders.emplace_back(sequence.begin() + static_cast<std::ptrdiff_t>(at),
                        sequence.begin() + static_cast<std::ptrdiff_t>(at + static_cast<std::size_t>(q)));
    at += static_cast<std::size_t>(q);
  }
  return orders;
}

}  // namespace detail

// Exact multi-day solver: bitmask dynamic program over visited-attraction
// sets, with the day index derived from the visit count so each day closes at
// its own hotel. f(mask, last) is the cheapest completion cost from the state
// "attractions in mask visited, currently at `last`".
inline RouteSolution heldkarp_multiday(const RouteInstance& inst) {
  const int n = static_cast<int>(inst.attraction_count());
  if (n > kDefaultNodeCap) {
    throw InfeasibleSizeError("heldkarp_multiday: " + std::to_string(n) +
                              " attractions exceed the node cap of " + std::to_string(kDefaultNodeCap));
  }
  const detail::DaySchedule sched(inst.per_day_quota);
  const std::uint32_t full = (1u << n) - 1u;

  std::vector<double> memo(static_cast<std::size_t>(1u << n) * static_cast<std::size_t>(n),
                           std::numeric_limits<double>::quiet_NaN());
  auto slot = [n](std::uint32_t mask, int last) {
    return static_cast<std::size_t>(mask) * static_cast<std::size_t>(n) + static_cast<std::size_t>(last);
  };

  auto completion = [&](auto&& self, std::uint32_t mask, int last) -> double {
    double& cell = memo[slot(mask, last)];
    if (!std::isnan(cell)) return cell;
    const int c = std::popcount(mask);
    if (mask == full) {
      cell = inst.hotel_to_attr(static_cast<std::size_t>(sched.days - 1), static_cast<std::size_t>(last));
      return cell;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const double cand = detail::transition_cost(inst, sched, c, last, j) +
                          self(self, mask | (1u << j), j);
      if (cand < best) best = cand;
    }
    cell = best;
    return cell;
  };

  // forward reconstruction; ties break toward the lowest attraction index
  std::vector<int> sequence;
  sequence.reserve(static_cast<std::size_t>(n));
  std::uint32_t mask = 0;
  int last = -1;
  for (int c = 0; c < n; ++c) {
    int pick = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const double step = (c == 0)
                              ? inst.hotel_to_attr(0, static_cast<std::size_t>(j))
                              : detail::transition_cost(inst, sched, c, last, j);
      const double cand = step + completion(completion, mask | (1u << j), j);
      if (cand < best) {
        best = cand;
        pick = j;
      }
    }
    sequence.push_back(pick);
    mask |= (1u << pick);
    last = pick;
  }

  RouteSolution sol;
  sol.day_orders = detail::split_by_quota(sequence, inst.per_day_quota);
  sol.total_km = route_distance(inst, sol.day_orders);
  sol.optimal = true;
  return sol;
}

// Best-first search over the same state space as the dynamic program. The
// heuristic is a spanning-tree bound over {current node} + unvisited
// attractions + the not-yet-closed day hotels, with the hotels contracted to
// one super-node: overnight hotel switches cost nothing, so any cheaper
// hotel-to-hotel edge must not inflate the bound.
inline RouteSolution astar_multiday(const RouteInstance& inst, bool use_heuristic = true) {
  const int n = static_cast<int>(inst.attraction_count());
  if (n > kDefaultNodeCap) {
    throw InfeasibleSizeError("astar_multiday: " + std::to_string(n) +
                              " attractions exceed the node cap of " + std::to_string(kDefaultNodeCap));
  }
  const detail::DaySchedule sched(inst.per_day_quota);
  const std::uint32_t full = (1u << n) - 1u;
  const std::size_t state_count = static_cast<std::size_t>(1u << n) * static_cast<std::size_t>(n);

  auto slot = [n](std::uint32_t mask, int last) {
    return static_cast<std::size_t>(mask) * static_cast<std::size_t>(n) + static_cast<std::size_t>(last);
  };

  auto heuristic = [&](std::uint32_t mask, int last) -> double {
    if (!use_heuristic) return 0.0;
    const int c = std::popcount(mask);
    const int first_open_day = sched.day_at[static_cast<std::size_t>(c)];
    std::vector<int> unvisited;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (1u << j))) unvisited.push_back(j);
    }
    // node 0 = current position, 1..m = unvisited, m+1 = hotel super-node
    const std::size_t m = unvisited.size();
    auto node_cost = [&](std::size_t a, std::size_t b) -> double {
      if (a > b) std::swap(a, b);
      auto attr_of = [&](std::size_t v) { return v == 0 ? last : unvisited[v - 1]; };
      if (b == m + 1) {
        double best = std::numeric_limits<double>::infinity();
        for (int d = first_open_day; d < sched.days; ++d) {
          best = std::min(best, inst.hotel_to_attr(static_cast<std::size_t>(d),
                                                   static_cast<std::size_t>(attr_of(a))));
        }
        return best;
      }
      return inst.attr_to_attr(static_cast<std::size_t>(attr_of(a)),
                               static_cast<std::size_t>(attr_of(b)));
    };
    return detail::prim_mst(m + 2, node_cost);
  };

  struct Entry {
    double f;
    double g;
    std::uint64_t key;  // state_count => goal
    bool operator>(const Entry& other) const {
      if (f != other.f) return f > other.f;
      if (g != other.g) return g > other.g;
      return key > other.key;
    }
  };

  const std::uint64_t goal_key = state_count;
  std::vector<double> best_g(state_count + 1, std::numeric_limits<double>::infinity());
  std::vector<std::int64_t> parent(state_count + 1, -1);
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

  for (int j = 0; j < n; ++j) {
    const std::uint32_t mask = 1u << j;
    const double g = inst.hotel_to_attr(0, static_cast<std::size_t>(j));
    const std::size_t key = slot(mask, j);
    best_g[key] = g;
    open.push({g + heuristic(mask, j), g, key});
  }

  RouteSolution sol;
  while (!open.empty()) {
    const Entry cur = open.top();
    open.pop();
    if (cur.g > best_g[cur.key]) continue;  // stale
    if (cur.key == goal_key) {
      // rebuild the visit sequence from the parent chain
      std::vector<int> sequence;
      std::int64_t key = parent[goal_key];
      while (key >= 0) {
        sequence.push_back(static_cast<int>(key % n));
        key = parent[static_cast<std::size_t>(key)];
      }
      std::reverse(sequence.begin(), sequence.end());
      sol.day_orders = detail::split_by_quota(sequence, inst.per_day_quota);
      sol.total_km = route_distance(inst, sol.day_orders);
      sol.optimal = true;
      return sol;
    }
    ++sol.nodes_expanded;

    const std::uint32_t mask = static_cast<std::uint32_t>(cur.key / n);
    const int last = static_cast<int>(cur.key % n);
    const int c = std::popcount(mask);
    if (mask == full) {
      const double g = cur.g + inst.hotel_to_attr(static_cast<std::size_t>(sched.days - 1),
                                                  static_cast<std::size_t>(last));
      if (g < best_g[goal_key]) {
        best_g[goal_key] = g;
        parent[goal_key] = static_cast<std::int64_t>(cur.key);
        open.push({g, g, goal_key});
      }
      continue;
    }
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      const double g = cur.g + detail::transition_cost(inst, sched, c, last, j);
      const std::uint32_t nmask = mask | (1u << j);
      const std::size_t key = slot(nmask, j);
      if (g < best_g[key]) {
        best_g[key] = g;
        parent[key] = static_cast<std::int64_t>(cur.key);
        open.push({g + heuristic(nmask, j), g, key});
      }
    }
  }
  throw InvalidInputError("astar_multiday: search exhausted without reaching the goal");
}

// Exhaustive single-day optimum: hotel -> permutation of the day's
// attractions -> hotel. Intended for small days (at most 8 stops).
inline RouteSolution optimize_day_route(const GeoPoint& hotel, const std::vector<GeoPoint>& day_attractions) {
  if (day_attractions.empty()) throw InvalidInputError("optimize_day_route: empty day");
  if (day_attractions.size() > 8) {
    throw InvalidInputError("optimize_day_route: more than 8 attractions in a day");
  }
  RouteInstance inst = RouteInstance::build({hotel}, day_attractions,
                                            {static_cast<int>(day_attractions.size())});
  const int m = static_cast<int>(day_attractions.size());
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);

  RouteSolution sol;
  sol.total_km = std::numeric_limits<double>::infinity();
  do {
    const double cost = detail::day_cost(inst, 0, perm);
    if (cost < sol.total_km) {
      sol.total_km = cost;
      sol.day_orders = {perm};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  sol.optimal = true;
  return sol;
}

// ---- Greedy itinerary construction ---------------------------------------

// The hotel and the nearest-neighbor attraction chain a greedy planner picks
// from a preference-filtered pool.
struct GreedySelection {
  const Business* hotel = nullptr;
  std::vector<const Business*> attractions;  // 4 per day, in visit order
  std::vector<const Business*> restaurants;  // the filtered restaurant pool
};

inline GreedySelection greedy_select(const BusinessPool& filtered, const PreferenceQuery& q) {
  const auto hotels = filtered.by_category(Category::hotel);
  const auto attractions = filtered.by_category(Category::attraction);
  const auto restaurants = filtered.by_category(Category::restaurant);
  const std::size_t needed = static_cast<std::size_t>(4 * q.days);
  if (hotels.empty() || restaurants.empty()) {
    throw InfeasibleError("greedy: filtered pool lacks hotels or restaurants");
  }
  if (attractions.size() < needed) {
    throw InfeasibleError("greedy: need " + std::to_string(needed) + " filtered attractions, have " +
                          std::to_string(attractions.size()));
  }

  GreedySelection sel;
  sel.restaurants = restaurants;

  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto* h : hotels) {
    double sum = 0.0;
    for (const auto* a : attractions) sum += haversine_km(h->location, a->location);
    const double mean = sum / static_cast<double>(attractions.size());
    if (mean < best_mean) {
      best_mean = mean;
      sel.hotel = h;
    }
  }

  std::vector<bool> used(attractions.size(), false);
  for (int day = 0; day < q.days; ++day) {
    GeoPoint current = sel.hotel->location;
    for (int k = 0; k < 4; ++k) {
      std::size_t pick = attractions.size();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < attractions.size(); ++i) {
        if (used[i]) continue;
        const double d = haversine_km(current, attractions[i]->location);
        if (d < best) {
          best = d;
          pick = i;
        }
      }
      used[pick] = true;
      sel.attractions.push_back(attractions[pick]);
      current = attractions[pick]->location;
    }
  }
  return sel;
}

namespace detail {

inline SlotEntry entry_for(const Business& b) {
  SlotEntry e;
  e.name = b.name;
  e.address = b.address;
  return e;
}

// Meals: nearest filtered restaurant to where the traveler is at meal time
// (hotel at breakfast, the morning attraction at lunch, the last afternoon
// attraction at dinner), never reusing a restaurant within the same day
// unless the pool is too small.
inline void place_meals(DayPlan& day, const GeoPoint& hotel_loc,
                        const std::vector<const Business*>& day_attrs,
                        const std::vector<const Business*>& restaurants) {
  std::vector<const Business*> used_today;
  auto nearest = [&](const GeoPoint& anchor) -> const Business* {
    if (used_today.size() == restaurants.size()) used_today.clear();
    const Business* pick = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto* r : restaurants) {
      if (std::find(used_today.begin(), used_today.end(), r) != used_today.end()) continue;
      const double d = haversine_km(anchor, r->location);
      if (d < best) {
        best = d;
        pick = r;
      }
    }
    used_today.push_back(pick);
    return pick;
  };
  const GeoPoint lunch_anchor = day_attrs.empty() ? hotel_loc : day_attrs.front()->location;
  const GeoPoint dinner_anchor =
      day_attrs.empty() ? hotel_loc : day_attrs[std::min<std::size_t>(2, day_attrs.size() - 1)]->location;
  day.breakfast = entry_for(*nearest(hotel_loc));
  day.lunch = entry_for(*nearest(lunch_anchor));
  day.dinner = entry_for(*nearest(dinner_anchor));
}

inline DayPlan make_day(const Business& hotel, const std::vector<const Business*>& day_attrs,
                        const std::vector<const Business*>& restaurants) {
  DayPlan day;
  day.accommodation = entry_for(hotel);
  if (!day_attrs.empty()) day.morning.push_back(entry_for(*day_attrs[0]));
  if (day_attrs.size() > 1) day.afternoon.push_back(entry_for(*day_attrs[1]));
  if (day_attrs.size() > 2) day.afternoon.push_back(entry_for(*day_attrs[2]));
  if (day_attrs.size() > 3) day.night.push_back(entry_for(*day_attrs[3]));
  place_meals(day, hotel.location, day_attrs, restaurants);
  return day;
}

}  // namespace detail

// Heuristic baseline: central hotel, nearest-neighbor attraction chains of
// exactly four stops per day, meals pinned to the day's positions.
inline Itinerary greedy_plan(const BusinessPool& filtered, const PreferenceQuery& q) {
  const auto sel = greedy_select(filtered, q);
  Itinerary it;
  it.source = PlanSource::greedy;
  it.query_ref = q.id();
  for (int day = 0; day < q.days; ++day) {
    const std::vector<const Business*> day_attrs(sel.attractions.begin() + day * 4,
                                                 sel.attractions.begin() + day * 4 + 4);
    it.days.push_back(detail::make_day(*sel.hotel, day_attrs, sel.restaurants));
  }
  return it;
}

// Same POI selection as the greedy baseline, with the attraction-to-day
// assignment and within-day order re-optimized by an exact solver.
inline Itinerary optimized_plan(const BusinessPool& filtered, const PreferenceQuery& q,
                                PlanSource solver) {
  const auto sel = greedy_select(filtered, q);
  std::vector<GeoPoint> hotel_per_day(static_cast<std::size_t>(q.days), sel.hotel->location);
  std::vector<GeoPoint> attraction_pts;
  for (const auto* a : sel.attractions) attraction_pts.push_back(a->location);
  const std::vector<int> quotas(static_cast<std::size_t>(q.days), 4);
  const auto inst = RouteInstance::build(std::move(hotel_per_day), std::move(attraction_pts), quotas);

  RouteSolution sol;
  switch (solver) {
    case PlanSource::heldkarp: sol = heldkarp_multiday(inst); break;
    case PlanSource::astar: sol = astar_multiday(inst); break;
    default: throw InvalidInputError("optimized_plan: solver must be heldkarp or astar");
  }

  Itinerary it;
  it.source = solver;
  it.query_ref = q.id();
  for (int day = 0; day < q.days; ++day) {
    std::vector<const Business*> day_attrs;
    for (int idx : sol.day_orders[static_cast<std::size_t>(day)]) {
      day_attrs.push_back(sel.attractions[static_cast<std::size_t>(idx)]);
    }
    it.days.push_back(detail::make_day(*sel.hotel, day_attrs, sel.restaurants));
  }
  return it;
}

}  // namespace tripbench
