#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tripbench/domain.hpp"
#include "tripbench/geo.hpp"
#include "tripbench/querygen.hpp"
#include "tripbench/text.hpp"

namespace tripbench {

using AttributeRatings = std::map<std::string, int>;

// One normalized point of interest.
struct Business {
  std::string id;
  std::string name;
  std::string address;
  GeoPoint location;
  double stars = 0.0;            // 1-5 in 0.5 steps
  std::optional<int> price;      // tier 1-4; absent when unknown
  Category category = Category::attraction;
  std::vector<std::string> cuisines;  // restaurants only, at most two
  std::string good_for_meal;          // carried through ingestion, unused downstream
  AttributeRatings attributes;
  int review_count = 0;
};

struct BusinessPool {
  std::string city;
  std::vector<Business> businesses;

  std::vector<const Business*> by_category(Category c) const {
    std::vector<const Business*> out;
    for (const auto& b : businesses)
      if (b.category == c) out.push_back(&b);
    return out;
  }

  const Business* find_id(const std::string& id) const {
    for (const auto& b : businesses)
      if (b.id == id) return &b;
    return nullptr;
  }
};

struct IngestConfig {
  std::string city = "Philadelphia";
  std::string hotel_keyword = "Hotels";
  std::vector<std::string> restaurant_keywords = {"Restaurants", "Food"};
  std::vector<std::string> attraction_keywords = {"Museums",
                                                  "Parks",
                                                  "Local Flavor",
                                                  "Zoos",
                                                  "Tours",
                                                  "Landmarks & Historical Buildings",
                                                  "Souvenir Shops"};
  int top_restaurants = 500;
};

struct FilterConfig {
  int good_threshold = 4;         // "good or excellent" cutoff on 1-5 scales
  int orientation_threshold = 2;  // medium-or-stronger tendency on 0-3 scales
};

namespace detail {

inline std::vector<std::string> category_list(const nlohmann::json& rec) {
  std::vector<std::string> out;
  if (!rec.contains("categories") || rec["categories"].is_null()) return out;
  const auto& cats = rec["categories"];
  if (cats.is_array()) {
    for (const auto& c : cats) out.push_back(trim(c.get<std::string>()));
  } else if (cats.is_string()) {
    for (const auto& c : split(cats.get<std::string>(), ',')) out.push_back(trim(c));
  }
  return out;
}

inline bool contains_keyword(const std::vector<std::string>& cats, const std::string& kw) {
  return std::any_of(cats.begin(), cats.end(), [&](const std::string& c) { return c == kw; });
}

inline bool contains_any(const std::vector<std::string>& cats, const std::vector<std::string>& kws) {
  return std::any_of(kws.begin(), kws.end(), [&](const std::string& kw) { return contains_keyword(cats, kw); });
}

// Price appears either as a tier integer or a "$$" style string.
inline std::optional<int> parse_price(const nlohmann::json& rec) {
  if (!rec.contains("price") || rec["price"].is_null()) return std::nullopt;
  const auto& p = rec["price"];
  if (p.is_number_integer()) {
    const int v = p.get<int>();
    return (v >= 1 && v <= 4) ? std::optional<int>(v) : std::nullopt;
  }
  if (p.is_string()) {
    const std::string s = trim(p.get<std::string>());
    if (s.empty()) return std::nullopt;
    if (std::all_of(s.begin(), s.end(), [](char c) { return c == '$'; })) {
      const int v = static_cast<int>(s.size());
      return (v >= 1 && v <= 4) ? std::optional<int>(v) : std::nullopt;
    }
    try {
      const int v = std::stoi(s);
      return (v >= 1 && v <= 4) ? std::optional<int>(v) : std::nullopt;
    } catch (...) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace detail

// Normalize raw base-data records into a categorized pool. Category rules:
// hotels require the exact hotel keyword in the record's category list
// ("Hotels & Travel" alone does not qualify), attractions match any of the
// attraction keywords, restaurants match the restaurant/food keywords and are
// truncated to the most-reviewed `top_restaurants`. Unopened businesses and
// records without a name or coordinates are dropped.
inline BusinessPool ingest_base(const std::vector<nlohmann::json>& raw_records,
                                const IngestConfig& config,
                                std::vector<std::string>* warnings = nullptr) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };

  std::vector<Business> hotels;
  std::vector<Business> restaurants;
  std::vector<Business> attractions;

  for (const auto& rec : raw_records) {
    const std::string id = rec.value("business_id", std::string());
    if (!rec.contains("name") || rec["name"].is_null() || rec["name"].get<std::string>().empty()) {
      warn("ingest: skipped record without name (id=" + id + ")");
      continue;
    }
    if (!rec.contains("latitude") || !rec.contains("longitude") || rec["latitude"].is_null() ||
        rec["longitude"].is_null()) {
      warn("ingest: skipped record without coordinates (id=" + id + ")");
      continue;
    }
    if (rec.value("is_open", 1) == 0) continue;

    GeoPoint loc{rec["latitude"].get<double>(), rec["longitude"].get<double>()};
    if (!finite(loc) || loc.lat < -90.0 || loc.lat > 90.0 || loc.lon < -180.0 || loc.lon > 180.0) {
      warn("ingest: skipped record with out-of-range coordinates (id=" + id + ")");
      continue;
    }

    const auto cats = detail::category_list(rec);
    Business b;
    b.id = id;
    b.name = rec["name"].get<std::string>();
    b.address = rec.value("address", std::string());
    b.location = loc;
    b.stars = rec.value("stars", 0.0);
    b.price = detail::parse_price(rec);
    b.good_for_meal = rec.value("good_for_meal", std::string());
    b.review_count = rec.value("review_count", 0);

    if (detail::contains_keyword(cats, config.hotel_keyword)) {
      b.category = Category::hotel;
      hotels.push_back(std::move(b));
    } else if (detail::contains_any(cats, config.attraction_keywords)) {
      b.category = Category::attraction;
      attractions.push_back(std::move(b));
    } else if (detail::contains_any(cats, config.restaurant_keywords)) {
      b.category = Category::restaurant;
      for (const auto& key : {"cuisine_1", "cuisine_2"}) {
        if (rec.contains(key) && rec[key].is_string() && !rec[key].get<std::string>().empty()) {
          b.cuisines.push_back(rec[key].get<std::string>());
        }
      }
      restaurants.push_back(std::move(b));
    }
  }

  if (static_cast<int>(restaurants.size()) > config.top_restaurants) {
    std::stable_sort(restaurants.begin(), restaurants.end(),
                     [](const Business& a, const Business& b) { return a.review_count > b.review_count; });
    restaurants.resize(static_cast<std::size_t>(config.top_restaurants));
  }

  if (hotels.empty()) throw EmptyCategoryError("ingest: no hotels survived");
  if (restaurants.empty()) throw EmptyCategoryError("ingest: no restaurants survived");
  if (attractions.empty()) throw EmptyCategoryError("ingest: no attractions survived");

  BusinessPool pool;
  pool.city = config.city;
  pool.businesses.reserve(hotels.size() + restaurants.size() + attractions.size());
  for (auto& b : hotels) pool.businesses.push_back(std::move(b));
  for (auto& b : restaurants) pool.businesses.push_back(std::move(b));
  for (auto& b : attractions) pool.businesses.push_back(std::move(b));
  return pool;
}

// Keep reviews whose usefulness score is at least 1, in input order.
inline std::vector<nlohmann::json> select_reviews(const std::vector<nlohmann::json>& reviews) {
  std::vector<nlohmann::json> out;
  for (const auto& r : reviews) {
    if (r.value("useful", 0.0) >= 1.0) out.push_back(r);
  }
  return out;
}

// Parse an extraction blurb into per-attribute integer levels. Hotels and
// restaurants use "... rating of <k> for <attribute>" sentences, attractions
// use "... <attribute> oriented level <k>". Sentences about attributes outside
// the category's set are ignored.
inline AttributeRatings parse_review_ratings(const std::string& extraction_text, Category category) {
  const auto& expected = attribute_names(category);
  const auto [lo, hi] = attribute_scale(category);
  const std::string text = to_lower(extraction_text);

  AttributeRatings out;
  for (const auto& attr : expected) {
    std::regex pat;
    if (category == Category::attraction) {
      pat = std::regex(attr + "[ -]oriented level ([0-9]+)");
    } else {
      // Adjectives may sit between "for" and the attribute word
      // ("rating of 2 for average service").
      pat = std::regex("rating of ([0-9]+) for [^.]*?\\b" + attr + "\\b");
    }
    std::smatch m;
    if (!std::regex_search(text, m, pat)) {
      throw ParseError("review ratings: missing attribute '" + attr + "' for " +
                       std::string(to_string(category)));
    }
    const int v = std::stoi(m[1].str());
    if (v < lo || v > hi) {
      throw ParseError("review ratings: attribute '" + attr + "' value " + std::to_string(v) +
                       " outside [" + std::to_string(lo) + "," + std::to_string(hi) + "]");
    }
    out[attr] = v;
  }
  return out;
}

// Shared predicate table: the same rules drive ground-truth filtering, the
// search tools, and entry-level preference checks.
inline bool satisfies(const Business& b, const Preference& pref, const FilterConfig& cfg) {
  switch (pref.kind) {
    case Preference::Kind::budget: {
      if (!b.price) return false;  // unverifiable price never passes a budget filter
      const auto& tiers = budget_tiers(budget_from_string(pref.value));
      return std::find(tiers.begin(), tiers.end(), *b.price) != tiers.end();
    }
    case Preference::Kind::cuisine:
      return std::any_of(b.cuisines.begin(), b.cuisines.end(),
                         [&](const std::string& c) { return iequals(c, pref.value); });
    case Preference::Kind::orientation: {
      auto it = b.attributes.find(pref.value);
      return it != b.attributes.end() && it->second >= cfg.orientation_threshold;
    }
    case Preference::Kind::restaurant_attr:
    case Preference::Kind::hotel_attr: {
      auto it = b.attributes.find(pref.value);
      return it != b.attributes.end() && it->second >= cfg.good_threshold;
    }
  }
  return false;
}

// Preferences from `prefs` that apply to businesses of category `c`.
inline std::vector<Preference> applicable_preferences(const std::vector<Preference>& prefs, Category c) {
  std::vector<Preference> out;
  for (const auto& p : prefs) {
    if (p.kind == Preference::Kind::budget || preference_category(p) == c) out.push_back(p);
  }
  return out;
}

// Ground-truth preference filtering: a business survives iff it satisfies
// every applicable preference of the query.
inline BusinessPool filter_pool(const BusinessPool& pool, const PreferenceQuery& query,
                                const FilterConfig& cfg = {}) {
  const auto prefs = preferences_of(query);
  BusinessPool out;
  out.city = pool.city;
  bool any[3] = {false, false, false};
  for (const auto& b : pool.businesses) {
    const auto applicable = applicable_preferences(prefs, b.category);
    const bool keep = std::all_of(applicable.begin(), applicable.end(),
                                  [&](const Preference& p) { return satisfies(b, p, cfg); });
    if (keep) {
      out.businesses.push_back(b);
      any[static_cast<int>(b.category)] = true;
    }
  }
  for (Category c : {Category::restaurant, Category::hotel, Category::attraction}) {
    if (!any[static_cast<int>(c)]) {
      throw InfeasibleQueryError(std::string("filter_pool: no ") + to_string(c) +
                                 " matches query " + query.id());
    }
  }
  return out;
}

// ---- JSON serialization -------------------------------------------------

inline void to_json(nlohmann::json& j, const Business& b) {
  j = nlohmann::json{{"business_id", b.id},
                     {"name", b.name},
                     {"address", b.address},
                     {"latitude", b.location.lat},
                     {"longitude", b.location.lon},
                     {"stars", b.stars},
                     {"category", to_string(b.category)},
                     {"attributes", b.attributes},
                     {"review_count", b.review_count}};
  if (b.price) j["price"] = *b.price;
  if (!b.good_for_meal.empty()) j["good_for_meal"] = b.good_for_meal;
  if (!b.cuisines.empty()) {
    if (b.cuisines.size() > 0) j["cuisine_1"] = b.cuisines[0];
    if (b.cuisines.size() > 1) j["cuisine_2"] = b.cuisines[1];
  }
}

inline void from_json(const nlohmann::json& j, Business& b) {
  b.id = j.at("business_id").get<std::string>();
  b.name = j.at("name").get<std::string>();
  b.address = j.value("address", std::string());
  b.location = {j.at("latitude").get<double>(), j.at("longitude").get<double>()};
  b.stars = j.value("stars", 0.0);
  b.price = j.contains("price") && !j["price"].is_null() ? std::optional<int>(j["price"].get<int>())
                                                         : std::nullopt;
  b.category = category_from_string(j.at("category").get<std::string>());
  b.good_for_meal = j.value("good_for_meal", std::string());
  b.attributes = j.value("attributes", AttributeRatings{});
  b.review_count = j.value("review_count", 0);
  b.cuisines.clear();
  if (j.contains("cuisine_1")) b.cuisines.push_back(j["cuisine_1"].get<std::string>());
  if (j.contains("cuisine_2")) b.cuisines.push_back(j["cuisine_2"].get<std::string>());
}

inline void to_json(nlohmann::json& j, const BusinessPool& pool) {
  j = nlohmann::json{{"city", pool.city}, {"businesses", pool.businesses}};
}

inline void from_json(const nlohmann::json& j, BusinessPool& pool) {
  pool.city = j.value("city", std::string());
  pool.businesses = j.at("businesses").get<std::vector<Business>>();
}

}  // namespace tripbench
