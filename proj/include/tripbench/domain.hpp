#pragma once

#include <array>
#include <string>
#include <vector>

#include "tripbench/errors.hpp"

namespace tripbench {

enum class Category { restaurant, hotel, attraction };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::restaurant: return "restaurant";
    case Category::hotel: return "hotel";
    case Category::attraction: return "attraction";
  }
  return "?";
}

inline Category category_from_string(const std::string& s) {
  if (s == "restaurant") return Category::restaurant;
  if (s == "hotel") return Category::hotel;
  if (s == "attraction") return Category::attraction;
  throw ParseError("unknown category: " + s);
}

enum class Budget { cheap, moderate, expensive };

inline const char* to_string(Budget b) {
  switch (b) {
    case Budget::cheap: return "cheap";
    case Budget::moderate: return "moderate";
    case Budget::expensive: return "expensive";
  }
  return "?";
}

inline Budget budget_from_string(const std::string& s) {
  if (s == "cheap") return Budget::cheap;
  if (s == "moderate") return Budget::moderate;
  if (s == "expensive") return Budget::expensive;
  throw ParseError("unknown budget: " + s);
}

// Three budget words over four price tiers; the top two tiers share "expensive".
inline const std::vector<int>& budget_tiers(Budget b) {
  static const std::vector<int> cheap = {1};
  static const std::vector<int> moderate = {2};
  static const std::vector<int> expensive = {3, 4};
  switch (b) {
    case Budget::cheap: return cheap;
    case Budget::moderate: return moderate;
    case Budget::expensive: return expensive;
  }
  return cheap;
}

inline const std::vector<std::string>& restaurant_attribute_names() {
  static const std::vector<std::string> v = {"flavor", "freshness", "service", "environment", "value"};
  return v;
}

inline const std::vector<std::string>& hotel_attribute_names() {
  static const std::vector<std::string> v = {"quality", "location", "service", "safety"};
  return v;
}

// Attraction orientations double as the attraction attribute set.
inline const std::vector<std::string>& orientation_names() {
  static const std::vector<std::string> v = {"family", "history", "activity", "nature", "food", "shopping"};
  return v;
}

inline const std::vector<std::string>& cuisine_names() {
  static const std::vector<std::string> v = {"US",       "Mexican", "Irish",  "French",     "Italian",
                                             "Greek",    "Indian",  "Chinese", "Japanese",  "Korean",
                                             "Vietnamese", "Thai",  "Asian Fusion", "Middle Eastern"};
  return v;
}

inline const std::vector<std::string>& attribute_names(Category c) {
  switch (c) {
    case Category::restaurant: return restaurant_attribute_names();
    case Category::hotel: return hotel_attribute_names();
    case Category::attraction: return orientation_names();
  }
  return restaurant_attribute_names();
}

// Rating scale per category: 1-5 for restaurants/hotels, 0-3 orientation levels.
inline std::pair<int, int> attribute_scale(Category c) {
  return c == Category::attraction ? std::pair<int, int>{0, 3} : std::pair<int, int>{1, 5};
}

// One evaluable preference drawn from a query. `value` is the option keyword
// (attribute name, cuisine, orientation) except for budget, where it is the
// budget word.
struct Preference {
  enum class Kind { budget, cuisine, orientation, restaurant_attr, hotel_attr };
  Kind kind;
  std::string value;

  friend bool operator==(const Preference& a, const Preference& b) {
    return a.kind == b.kind && a.value == b.value;
  }
};

inline Category preference_category(const Preference& p) {
  switch (p.kind) {
    case Preference::Kind::cuisine:
    case Preference::Kind::restaurant_attr: return Category::restaurant;
    case Preference::Kind::hotel_attr: return Category::hotel;
    case Preference::Kind::orientation: return Category::attraction;
    case Preference::Kind::budget: break;
  }
  throw InvalidInputError("budget preference applies to every category");
}

}  // namespace tripbench
