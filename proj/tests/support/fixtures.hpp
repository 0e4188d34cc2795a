#pragma once

// Shared synthetic pools and plan builders for metric tests.

#include <memory>
#include <string>
#include <vector>

#include "tripbench/metrics.hpp"

namespace fixtures {

using namespace tripbench;

inline Business poi(const std::string& id, Category c, GeoPoint loc,
                    std::optional<int> price = 1, AttributeRatings attrs = {},
                    std::vector<std::string> cuisines = {}) {
  Business b;
  b.id = id;
  b.name = "The " + id;
  b.address = id + " Ave";
  b.category = c;
  b.location = loc;
  b.price = price;
  b.attributes = std::move(attrs);
  b.cuisines = std::move(cuisines);
  return b;
}

struct DaySpec {
  std::string hotel;                    // business id, or "-" / "?name" for missing / unresolvable
  std::vector<std::string> attractions; // same encoding
  std::vector<std::string> meals = {"-", "-", "-"};
};

// Build an itinerary from business ids and run it through the failure checks.
// Ids prefixed with '?' become out-of-pool names; "-" becomes a missing slot.
inline Itinerary build_plan(const BusinessPool& pool, const std::vector<DaySpec>& days,
                            const std::string& query_ref = "q0",
                            PlanSource source = PlanSource::llm_task2) {
  auto entry_of = [&](const std::string& spec) {
    SlotEntry e;
    if (spec == "-") {
      e.missing = true;
      return e;
    }
    if (!spec.empty() && spec[0] == '?') {
      e.name = spec.substr(1);
      e.address = "nowhere";
      return e;
    }
    const Business* b = pool.find_id(spec);
    e.name = b ? b->name : spec;
    e.address = b ? b->address : "unknown";
    return e;
  };
  Itinerary it;
  it.query_ref = query_ref;
  it.source = source;
  for (const auto& spec : days) {
    DayPlan day;
    day.accommodation = entry_of(spec.hotel);
    day.breakfast = entry_of(spec.meals.size() > 0 ? spec.meals[0] : "-");
    day.lunch = entry_of(spec.meals.size() > 1 ? spec.meals[1] : "-");
    day.dinner = entry_of(spec.meals.size() > 2 ? spec.meals[2] : "-");
    for (std::size_t i = 0; i < spec.attractions.size(); ++i) {
      SlotEntry e = entry_of(spec.attractions[i]);
      if (i == 0) {
        day.morning.push_back(e);
      } else if (i <= 2) {
        day.afternoon.push_back(e);
      } else {
        day.night.push_back(e);
      }
    }
    it.days.push_back(std::move(day));
  }
  return check_failures(it, pool);
}

inline EvaluationBatch make_batch(std::shared_ptr<const BusinessPool> pool,
                                  std::vector<std::pair<Itinerary, PreferenceQuery>> plans,
                                  MetricConfig config = {}) {
  EvaluationBatch batch;
  batch.config = config;
  for (auto& [plan, query] : plans) {
    batch.plans.push_back({std::move(plan), query, pool});
  }
  return batch;
}

// Verbal-metric pool: cheap-tier businesses whose attributes make
// satisfaction counts easy to stage. Attractions rated on "nature".
inline std::shared_ptr<BusinessPool> verbal_pool() {
  auto pool = std::make_shared<BusinessPool>();
  // hotels: quality high / low
  pool->businesses.push_back(poi("h_good", Category::hotel, {39.95, -75.16}, 1,
                                 {{"quality", 5}, {"location", 4}, {"service", 4}, {"safety", 4}}));
  pool->businesses.push_back(poi("h_bad", Category::hotel, {39.96, -75.17}, 1,
                                 {{"quality", 3}, {"location", 3}, {"service", 3}, {"safety", 3}}));
  // restaurants: Thai satisfied / US mismatch / flavor low
  pool->businesses.push_back(poi("r_good", Category::restaurant, {39.94, -75.15}, 1,
                                 {{"flavor", 4}, {"freshness", 4}, {"service", 4}, {"environment", 4}, {"value", 4}},
                                 {"Thai"}));
  pool->businesses.push_back(poi("r_flat", Category::restaurant, {39.93, -75.14}, 1,
                                 {{"flavor", 2}, {"freshness", 2}, {"service", 2}, {"environment", 2}, {"value", 2}},
                                 {"Thai"}));
  pool->businesses.push_back(poi("r_other", Category::restaurant, {39.92, -75.13}, 1,
                                 {{"flavor", 5}, {"freshness", 5}, {"service", 5}, {"environment", 5}, {"value", 5}},
                                 {"US"}));
  // attractions: nature strong / weak / none
  pool->businesses.push_back(poi("a_nature", Category::attraction, {39.91, -75.12}, 1, {{"nature", 3}}));
  pool->businesses.push_back(poi("a_mild", Category::attraction, {39.90, -75.11}, 1, {{"nature", 1}}));
  pool->businesses.push_back(poi("a_none", Category::attraction, {39.89, -75.10}, 1, {{"nature", 0}}));
  return pool;
}

inline PreferenceQuery nature_thai_query(int days = 1) {
  PreferenceQuery q;
  q.days = days;
  q.budget = Budget::cheap;
  q.orientation = "nature";
  q.cuisine = "Thai";
  q.restaurant_prefs = {"flavor"};
  q.hotel_prefs = {"quality"};
  return q;
}

}  // namespace fixtures
