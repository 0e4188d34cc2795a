#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tripbench/dataset.hpp"
#include "tripbench/text.hpp"

namespace tripbench {

enum class PlanSource { greedy, astar, heldkarp, llm_task1, llm_task2, llm_task3, llm_task4 };

inline const char* to_string(PlanSource s) {
  switch (s) {
    case PlanSource::greedy: return "greedy";
    case PlanSource::astar: return "astar";
    case PlanSource::heldkarp: return "heldkarp";
    case PlanSource::llm_task1: return "llm-task1";
    case PlanSource::llm_task2: return "llm-task2";
    case PlanSource::llm_task3: return "llm-task3";
    case PlanSource::llm_task4: return "llm-task4";
  }
  return "?";
}

inline PlanSource plan_source_from_string(const std::string& s) {
  for (PlanSource v : {PlanSource::greedy, PlanSource::astar, PlanSource::heldkarp,
                       PlanSource::llm_task1, PlanSource::llm_task2, PlanSource::llm_task3,
                       PlanSource::llm_task4}) {
    if (s == to_string(v)) return v;
  }
  throw ParseError("unknown plan source: " + s);
}

// One recommendation slot. A "-" name marks a missing recommendation; an
// entry that cannot be matched to the pool is out-of-pool. The two flags are
// mutually exclusive, and a resolved entry carries neither.
struct SlotEntry {
  std::string name;
  std::string address;
  bool missing = false;
  bool out_of_pool = false;
  std::optional<std::string> resolved;  // business id once matched

  static SlotEntry absent() {
    SlotEntry e;
    e.missing = true;
    return e;
  }
};

// One day following the plan template: accommodation, three meals, and
// attraction sessions of nominally 1 (morning), 2 (afternoon), 1 (night).
struct DayPlan {
  SlotEntry accommodation;
  SlotEntry breakfast;
  SlotEntry lunch;
  SlotEntry dinner;
  std::vector<SlotEntry> morning;
  std::vector<SlotEntry> afternoon;
  std::vector<SlotEntry> night;

  // Attractions in visit order.
  std::vector<const SlotEntry*> attraction_sequence() const {
    std::vector<const SlotEntry*> out;
    for (const auto& e : morning) out.push_back(&e);
    for (const auto& e : afternoon) out.push_back(&e);
    for (const auto& e : night) out.push_back(&e);
    return out;
  }

  std::vector<SlotEntry*> attraction_sequence() {
    std::vector<SlotEntry*> out;
    for (auto& e : morning) out.push_back(&e);
    for (auto& e : afternoon) out.push_back(&e);
    for (auto& e : night) out.push_back(&e);
    return out;
  }

  std::vector<const SlotEntry*> meal_sequence() const { return {&breakfast, &lunch, &dinner}; }
};

struct Itinerary {
  std::vector<DayPlan> days;
  PlanSource source = PlanSource::greedy;
  std::string query_ref;

  bool any_flag(bool SlotEntry::* flag) const {
    for (const auto& d : days) {
      if (d.accommodation.*flag || d.breakfast.*flag || d.lunch.*flag || d.dinner.*flag) return true;
      for (const auto* e : d.attraction_sequence())
        if (e->*flag) return true;
    }
    return false;
  }
};

namespace detail {

inline SlotEntry parse_entry(const nlohmann::json& j, const std::string& path) {
  if (j.is_null()) return SlotEntry::absent();
  if (!j.is_object()) throw ParseError("plan document: expected object at " + path);
  SlotEntry e;
  e.name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "-";
  e.address = j.contains("address") && j["address"].is_string() ? j["address"].get<std::string>() : "-";
  if (trim(e.name).empty() || trim(e.name) == "-") {
    e.name.clear();
    e.address.clear();
    e.missing = true;
  }
  return e;
}

inline std::vector<SlotEntry> parse_session(const nlohmann::json& j, const std::string& path) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw ParseError("plan document: expected array at " + path);
  std::vector<SlotEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_entry(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

// Parse the extraction-schema document: a top-level array of days, each an
// object with accommodation/breakfast/lunch/dinner entries and
// morning/afternoon/night attraction arrays. "-" or null entries become
// missing slots; an empty session array is simply zero attractions.
inline Itinerary parse_itinerary(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("plan document: top level must be an array of days");
  if (doc.empty()) throw ParseError("plan document: no days");
  Itinerary it;
  for (std::size_t d = 0; d < doc.size(); ++d) {
    const std::string day_path = "day " + std::to_string(d + 1);
    const auto& jd = doc[d];
    if (!jd.is_object()) throw ParseError("plan document: expected object at " + day_path);
    DayPlan day;
    auto slot = [&](const char* key) -> nlohmann::json {
      return jd.contains(key) ? jd[key] : nlohmann::json();
    };
    day.accommodation = detail::parse_entry(slot("accommodation"), day_path + "/accommodation");
    day.breakfast = detail::parse_entry(slot("breakfast"), day_path + "/breakfast");
    day.lunch = detail::parse_entry(slot("lunch"), day_path + "/lunch");
    day.dinner = detail::parse_entry(slot("dinner"), day_path + "/dinner");
    day.morning = detail::parse_session(slot("morning_attractions"), day_path + "/morning_attractions");
    day.afternoon = detail::parse_session(slot("afternoon_attractions"), day_path + "/afternoon_attractions");
    day.night = detail::parse_session(slot("night_attractions"), day_path + "/night_attractions");
    it.days.push_back(std::move(day));
  }
  return it;
}

// Emit the same schema back out (used for solver plans and golden files).
inline nlohmann::json itinerary_to_document(const Itinerary& it) {
  auto entry = [](const SlotEntry& e) {
    return e.missing ? nlohmann::json{{"name", "-"}, {"address", "-"}}
                     : nlohmann::json{{"name", e.name}, {"address", e.address}};
  };
  auto session = [&](const std::vector<SlotEntry>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : v) arr.push_back(entry(e));
    return arr;
  };
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& d : it.days) {
    doc.push_back(nlohmann::json{{"accommodation", entry(d.accommodation)},
                                 {"breakfast", entry(d.breakfast)},
                                 {"morning_attractions", session(d.morning)},
                                 {"lunch", entry(d.lunch)},
                                 {"afternoon_attractions", session(d.afternoon)},
                                 {"dinner", entry(d.dinner)},
                                 {"night_attractions", session(d.night)}});
  }
  return doc;
}

// Index of normalized names per category; first occurrence wins on collisions.
class PoolNameIndex {
 public:
  explicit PoolNameIndex(const BusinessPool& pool) {
    for (const auto& b : pool.businesses) {
      auto& m = maps_[static_cast<int>(b.category)];
      m.emplace(normalize_name(b.name), b.id);
    }
  }

  std::optional<std::string> resolve(Category c, const std::string& name) const {
    const auto& m = maps_[static_cast<int>(c)];
    const auto it = m.find(normalize_name(name));
    if (it == m.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::string> maps_[3];
};

// Resolve every entry against the generator's pool by normalized name within
// the slot's category. Unmatched entries are flagged out-of-pool. Idempotent.
inline Itinerary check_failures(Itinerary it, const BusinessPool& pool) {
  const PoolNameIndex index(pool);
  auto resolve = [&](SlotEntry& e, Category c) {
    if (e.missing || trim(e.name).empty() || trim(e.name) == "-") {
      e = SlotEntry::absent();
      return;
    }
    e.out_of_pool = false;
    e.resolved = index.resolve(c, e.name);
    if (!e.resolved) e.out_of_pool = true;
  };
  for (auto& d : it.days) {
    resolve(d.accommodation, Category::hotel);
    resolve(d.breakfast, Category::restaurant);
    resolve(d.lunch, Category::restaurant);
    resolve(d.dinner, Category::restaurant);
    for (auto* e : d.attraction_sequence()) resolve(*e, Category::attraction);
  }
  return it;
}

}  // namespace tripbench
