#pragma once

// Synthetic city generator: raw base-data and attribute records in the same
// shape as the real ingestion inputs. Used by the sample-data subcommand and
// the acceptance suite. Coverage is arranged so that every sampled query
// stays feasible: each budget tier has well-rated hotels, every cuisine/tier
// pair has well-rated restaurants, and every orientation/tier pair has enough
// medium-or-stronger attractions for a four-day trip.

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/domain.hpp"
#include "tripbench/rng.hpp"

namespace tripbench {

struct SynthConfig {
  double center_lat = 39.9526;
  double center_lon = -75.1652;
  double spread_deg = 0.12;
  int hotels_per_tier = 10;
  int hotel_distractors_per_tier = 4;
  int restaurants_per_cuisine_tier = 2;
  int restaurant_distractors = 360;
  int attractions_per_orientation_tier = 18;
  int extraction_text_every = 7;  // every n-th record ships prose instead of numbers
};

struct SynthDataset {
  std::vector<nlohmann::json> base_records;
  std::vector<nlohmann::json> attribute_records;
};

namespace detail {

inline GeoPoint synth_point(Rng& rng, const SynthConfig& cfg) {
  // a few dense neighborhoods over a uniform background
  static const double offsets[6][2] = {{0.03, 0.04},  {-0.05, 0.02}, {0.01, -0.06},
                                       {-0.02, -0.03}, {0.06, -0.01}, {-0.04, 0.06}};
  if (uniform_unit(rng) < 0.5) {
    const auto& o = offsets[uniform_index(rng, 6)];
    return {cfg.center_lat + o[0] + (uniform_unit(rng) - 0.5) * 0.02,
            cfg.center_lon + o[1] + (uniform_unit(rng) - 0.5) * 0.02};
  }
  return {cfg.center_lat + (uniform_unit(rng) - 0.5) * 2.0 * cfg.spread_deg,
          cfg.center_lon + (uniform_unit(rng) - 0.5) * 2.0 * cfg.spread_deg};
}

inline std::string rating_sentences(Category c, const AttributeRatings& ratings) {
  std::ostringstream out;
  for (const auto& [attr, level] : ratings) {
    if (c == Category::attraction) {
      out << "This place has a " << attr << " oriented level " << level << ". ";
    } else {
      out << (c == Category::hotel ? "The hotel has a rating of " : "This place has a rating of ")
          << level << " for " << attr << ". ";
    }
  }
  return out.str();
}

inline nlohmann::json attribute_record(const std::string& id, Category c,
                                       const AttributeRatings& ratings, bool as_text) {
  if (as_text) {
    return {{"business_id", id}, {"extraction_text", rating_sentences(c, ratings)}};
  }
  return {{"business_id", id}, {"ratings", ratings}};
}

}  // namespace detail

inline SynthDataset make_sample_city(std::uint64_t seed, const SynthConfig& cfg = {}) {
  Rng rng(seed);
  SynthDataset data;
  int counter = 0;

  auto base = [&](const std::string& id, const std::string& name, const std::string& categories,
                  int tier) {
    const GeoPoint loc = detail::synth_point(rng, cfg);
    nlohmann::json rec{{"business_id", id},
                       {"name", name},
                       {"address", std::to_string(100 + counter) + " Sample St"},
                       {"latitude", loc.lat},
                       {"longitude", loc.lon},
                       {"stars", 3.0 + static_cast<double>(uniform_index(rng, 5)) * 0.5},
                       {"price", tier},
                       {"review_count", 50 + static_cast<int>(uniform_index(rng, 5000))},
                       {"is_open", 1},
                       {"categories", categories}};
    ++counter;
    return rec;
  };
  auto push = [&](nlohmann::json rec, Category c, const AttributeRatings& ratings) {
    const bool as_text = cfg.extraction_text_every > 0 && counter % cfg.extraction_text_every == 0;
    data.attribute_records.push_back(
        detail::attribute_record(rec["business_id"].get<std::string>(), c, ratings, as_text));
    data.base_records.push_back(std::move(rec));
  };

  // hotels
  for (int tier = 1; tier <= 4; ++tier) {
    for (int i = 0; i < cfg.hotels_per_tier; ++i) {
      AttributeRatings r;
      for (const auto& a : hotel_attribute_names()) r[a] = 4 + static_cast<int>(uniform_index(rng, 2));
      const std::string id = "hotel_t" + std::to_string(tier) + "_" + std::to_string(i);
      push(base(id, "Hotel " + std::to_string(tier) + std::to_string(i) + " Plaza", "Hotels", tier),
           Category::hotel, r);
    }
    for (int i = 0; i < cfg.hotel_distractors_per_tier; ++i) {
      AttributeRatings r;
      for (const auto& a : hotel_attribute_names()) r[a] = 1 + static_cast<int>(uniform_index(rng, 3));
      const std::string id = "hotel_t" + std::to_string(tier) + "_d" + std::to_string(i);
      push(base(id, "Budget Lodge " + std::to_string(tier) + std::to_string(i), "Hotels", tier),
           Category::hotel, r);
    }
  }

  // restaurants: full coverage with high review counts, then distractors
  for (std::size_t c = 0; c < cuisine_names().size(); ++c) {
    for (int tier = 1; tier <= 4; ++tier) {
      for (int i = 0; i < cfg.restaurants_per_cuisine_tier; ++i) {
        AttributeRatings r;
        for (const auto& a : restaurant_attribute_names()) r[a] = 4 + static_cast<int>(uniform_index(rng, 2));
        const std::string id = "rest_c" + std::to_string(c) + "_t" + std::to_string(tier) + "_" +
                               std::to_string(i);
        auto rec = base(id, cuisine_names()[c] + " Table " + std::to_string(tier) + std::to_string(i),
                        "Restaurants", tier);
        rec["review_count"] = 100000 + counter;  // always inside the most-reviewed cut
        rec["cuisine_1"] = cuisine_names()[c];
        if (uniform_unit(rng) < 0.3) {
          rec["cuisine_2"] = cuisine_names()[uniform_index(rng, cuisine_names().size())];
        }
        rec["good_for_meal"] = uniform_unit(rng) < 0.5 ? "dinner" : "lunch";
        push(std::move(rec), Category::restaurant, r);
      }
    }
  }
  for (int i = 0; i < cfg.restaurant_distractors; ++i) {
    AttributeRatings r;
    for (const auto& a : restaurant_attribute_names()) r[a] = 1 + static_cast<int>(uniform_index(rng, 5));
    const std::string id = "rest_d" + std::to_string(i);
    auto rec = base(id, "Corner Diner " + std::to_string(i), "Food",
                    1 + static_cast<int>(uniform_index(rng, 4)));
    rec["cuisine_1"] = cuisine_names()[uniform_index(rng, cuisine_names().size())];
    push(std::move(rec), Category::restaurant, r);
  }

  // attractions
  static const char* attraction_categories[] = {"Museums", "Parks", "Local Flavor", "Zoos",
                                                "Tours", "Landmarks & Historical Buildings",
                                                "Souvenir Shops"};
  for (std::size_t o = 0; o < orientation_names().size(); ++o) {
    for (int tier = 1; tier <= 4; ++tier) {
      for (int i = 0; i < cfg.attractions_per_orientation_tier; ++i) {
        AttributeRatings r;
        for (const auto& a : orientation_names()) r[a] = static_cast<int>(uniform_index(rng, 2));
        r[orientation_names()[o]] = 2 + static_cast<int>(uniform_index(rng, 2));
        const std::string id = "attr_o" + std::to_string(o) + "_t" + std::to_string(tier) + "_" +
                               std::to_string(i);
        push(base(id,
                  orientation_names()[o] + " Spot " + std::to_string(tier) + "-" + std::to_string(i),
                  attraction_categories[uniform_index(rng, 7)], tier),
             Category::attraction, r);
      }
    }
  }

  // ingestion noise: an airport-style record, a closed business, a nameless one
  data.base_records.push_back(nlohmann::json{{"business_id", "noise_airport"},
                                             {"name", "Sample International Airport"},
                                             {"address", "1 Runway Rd"},
                                             {"latitude", cfg.center_lat},
                                             {"longitude", cfg.center_lon},
                                             {"stars", 3.0},
                                             {"review_count", 9999},
                                             {"is_open", 1},
                                             {"categories", "Hotels & Travel"}});
  data.base_records.push_back(nlohmann::json{{"business_id", "noise_closed"},
                                             {"name", "Shuttered Museum"},
                                             {"address", "2 Gone Ave"},
                                             {"latitude", cfg.center_lat},
                                             {"longitude", cfg.center_lon},
                                             {"stars", 4.0},
                                             {"review_count", 12},
                                             {"is_open", 0},
                                             {"categories", "Museums"}});
  data.base_records.push_back(nlohmann::json{{"business_id", "noise_nameless"},
                                             {"name", ""},
                                             {"latitude", cfg.center_lat},
                                             {"longitude", cfg.center_lon},
                                             {"categories", "Parks"}});
  return data;
}

}  // namespace tripbench
