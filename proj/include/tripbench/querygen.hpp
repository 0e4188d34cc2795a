#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/domain.hpp"
#include "tripbench/rng.hpp"

namespace tripbench {

// A sampled trip preference bundle. Selections count toward the preference
// total as: days + budget + orientation + cuisine + each restaurant quality +
// each hotel quality, which lands in [6, 10].
struct PreferenceQuery {
  int days = 2;  // 2, 3, or 4
  Budget budget = Budget::cheap;
  std::string orientation;
  std::vector<std::string> restaurant_prefs;  // 1-3, duplicate-free
  std::string cuisine;
  std::vector<std::string> hotel_prefs;  // 1-3, duplicate-free
  std::uint64_t seed = 0;

  int preference_total() const {
    return 4 + static_cast<int>(restaurant_prefs.size() + hotel_prefs.size());
  }

  std::string id() const { return "q" + std::to_string(seed); }

  friend bool operator==(const PreferenceQuery& a, const PreferenceQuery& b) {
    return a.days == b.days && a.budget == b.budget && a.orientation == b.orientation &&
           a.restaurant_prefs == b.restaurant_prefs && a.cuisine == b.cuisine &&
           a.hotel_prefs == b.hotel_prefs;
  }
};

namespace detail {

// Count of list preferences: 1, 2 or 3 with weights 0.6 / 0.3 / 0.1.
inline std::size_t draw_pref_count(Rng& rng) {
  static const double w[3] = {0.6, 0.3, 0.1};
  return 1 + weighted_index(rng, std::span<const double>(w, 3));
}

// Draw `count` distinct options, returned in option-list order.
inline std::vector<std::string> draw_prefs(Rng& rng, const std::vector<std::string>& options,
                                           std::size_t count) {
  auto idx = sample_without_replacement(rng, options.size(), count);
  std::sort(idx.begin(), idx.end());
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i : idx) out.push_back(options[i]);
  return out;
}

}  // namespace detail

// Deterministic draw of one query. The draw order (days, budget, orientation,
// restaurant count + members, cuisine, hotel count + members) is fixed so a
// seed always reproduces the same bundle.
inline PreferenceQuery sample_query(std::uint64_t seed) {
  Rng rng(seed);
  PreferenceQuery q;
  q.seed = seed;
  q.days = 2 + static_cast<int>(uniform_index(rng, 3));
  q.budget = static_cast<Budget>(uniform_index(rng, 3));
  q.orientation = orientation_names()[uniform_index(rng, orientation_names().size())];
  q.restaurant_prefs = detail::draw_prefs(rng, restaurant_attribute_names(), detail::draw_pref_count(rng));
  q.cuisine = cuisine_names()[uniform_index(rng, cuisine_names().size())];
  q.hotel_prefs = detail::draw_prefs(rng, hotel_attribute_names(), detail::draw_pref_count(rng));
  return q;
}

namespace detail {

inline std::string join_good(const std::vector<std::string>& attrs) {
  std::string out;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i > 0) out += (i + 1 == attrs.size()) ? " and " : ", ";
    out += "good " + attrs[i];
  }
  return out;
}

}  // namespace detail

// Render the bundle as one query paragraph. Every selected option appears as
// its keyword phrase exactly once, so a scanner over the option lists can
// recover the structured query.
inline std::string render_query_text(const PreferenceQuery& q) {
  std::ostringstream out;
  out << "I want to go for a " << q.days << "-day trip with a " << to_string(q.budget)
      << " budget. I want to visit some " << q.orientation << "-oriented attractions. "
      << "Please find some " << detail::join_good(q.restaurant_prefs)
      << " restaurants that provide " << q.cuisine << " cuisine, I want to stay in ";

  std::vector<std::string> hotel = q.hotel_prefs;
  const bool has_location = std::find(hotel.begin(), hotel.end(), "location") != hotel.end();
  if (has_location) {
    hotel.erase(std::remove(hotel.begin(), hotel.end(), "location"), hotel.end());
    if (hotel.empty()) {
      out << "a hotel in a good location.";
    } else {
      out << "a " << detail::join_good(hotel) << " hotel in a good location.";
    }
  } else {
    out << "a " << detail::join_good(hotel) << " hotel.";
  }
  return out.str();
}

// All evaluable preferences carried by a query (budget, orientation, cuisine,
// restaurant qualities, hotel qualities). Day count is a structural request,
// not an entry-level preference.
inline std::vector<Preference> preferences_of(const PreferenceQuery& q) {
  std::vector<Preference> prefs;
  prefs.push_back({Preference::Kind::budget, to_string(q.budget)});
  prefs.push_back({Preference::Kind::orientation, q.orientation});
  prefs.push_back({Preference::Kind::cuisine, q.cuisine});
  for (const auto& a : q.restaurant_prefs) prefs.push_back({Preference::Kind::restaurant_attr, a});
  for (const auto& a : q.hotel_prefs) prefs.push_back({Preference::Kind::hotel_attr, a});
  return prefs;
}

inline void to_json(nlohmann::json& j, const PreferenceQuery& q) {
  j = nlohmann::json{{"seed", q.seed},
                     {"days", q.days},
                     {"budget", to_string(q.budget)},
                     {"orientation", q.orientation},
                     {"restaurant_prefs", q.restaurant_prefs},
                     {"cuisine", q.cuisine},
                     {"hotel_prefs", q.hotel_prefs},
                     {"text", render_query_text(q)}};
}

inline void from_json(const nlohmann::json& j, PreferenceQuery& q) {
  q.seed = j.value("seed", std::uint64_t{0});
  q.days = j.at("days").get<int>();
  q.budget = budget_from_string(j.at("budget").get<std::string>());
  q.orientation = j.at("orientation").get<std::string>();
  q.restaurant_prefs = j.at("restaurant_prefs").get<std::vector<std::string>>();
  q.cuisine = j.at("cuisine").get<std::string>();
  q.hotel_prefs = j.at("hotel_prefs").get<std::vector<std::string>>();
}

}  // namespace tripbench
