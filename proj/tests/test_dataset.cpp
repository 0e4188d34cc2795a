#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "tripbench/dataset.hpp"

using namespace tripbench;
using nlohmann::json;

namespace {

json base_record(const std::string& id, const std::string& name, const std::string& categories,
                 double lat = 39.95, double lon = -75.16) {
  return json{{"business_id", id}, {"name", name},       {"address", "1 Test St"},
              {"latitude", lat},   {"longitude", lon},   {"stars", 4.0},
              {"price", 2},        {"review_count", 10}, {"is_open", 1},
              {"categories", categories}};
}

std::vector<json> minimal_records() {
  return {base_record("h1", "Inn One", "Hotels"),
          base_record("r1", "Cafe One", "Restaurants"),
          base_record("a1", "Park One", "Parks")};
}

Business make_business(Category c, std::optional<int> price, AttributeRatings attrs,
                       std::vector<std::string> cuisines = {}) {
  Business b;
  b.id = "x";
  b.name = "X";
  b.category = c;
  b.price = price;
  b.attributes = std::move(attrs);
  b.cuisines = std::move(cuisines);
  return b;
}

}  // namespace

TEST_CASE("ingest excludes Hotels & Travel without the Hotels category") {
  auto records = minimal_records();
  records.push_back(base_record("h2", "Airport Shuttle", "Hotels & Travel"));
  const auto pool = ingest_base(records, {});
  CHECK(pool.by_category(Category::hotel).size() == 1);
  CHECK(pool.find_id("h2") == nullptr);
}

TEST_CASE("ingest keeps the most-reviewed restaurants up to the cap") {
  IngestConfig cfg;
  cfg.top_restaurants = 500;
  auto records = minimal_records();
  for (int i = 0; i < 600; ++i) {
    auto rec = base_record("r" + std::to_string(1000 + i), "Diner " + std::to_string(i), "Food");
    rec["review_count"] = i;  // distinct counts
    records.push_back(rec);
  }
  const auto pool = ingest_base(records, cfg);
  const auto rest = pool.by_category(Category::restaurant);
  REQUIRE(rest.size() == 500);
  for (const auto* r : rest) CHECK(r->review_count >= 100);
}

TEST_CASE("ingest drops unopened businesses and bad records") {
  auto records = minimal_records();
  auto closed = base_record("h9", "Closed Inn", "Hotels");
  closed["is_open"] = 0;
  records.push_back(closed);

  auto unnamed = base_record("u1", "", "Parks");
  records.push_back(unnamed);
  auto no_coords = base_record("u2", "Lost Park", "Parks");
  no_coords.erase("latitude");
  records.push_back(no_coords);

  std::vector<std::string> warnings;
  const auto pool = ingest_base(records, {}, &warnings);
  CHECK(pool.find_id("h9") == nullptr);
  CHECK(pool.find_id("u1") == nullptr);
  CHECK(pool.find_id("u2") == nullptr);
  CHECK(warnings.size() == 2);
}

TEST_CASE("ingest fails when a category is empty") {
  std::vector<json> records = {base_record("h1", "Inn One", "Hotels"),
                               base_record("r1", "Cafe One", "Restaurants")};
  CHECK_THROWS_AS(ingest_base(records, {}), EmptyCategoryError);
}

TEST_CASE("ingest parses dollar-sign prices and carries cuisines") {
  auto records = minimal_records();
  auto rec = base_record("r7", "Sushi Bar", "Restaurants");
  rec["price"] = "$$$";
  rec["cuisine_1"] = "Japanese";
  rec["cuisine_2"] = "Korean";
  records.push_back(rec);
  const auto pool = ingest_base(records, {});
  const auto* r = pool.find_id("r7");
  REQUIRE(r != nullptr);
  CHECK(r->price == 3);
  CHECK(r->cuisines == std::vector<std::string>{"Japanese", "Korean"});
}

TEST_CASE("select_reviews keeps usefulness >= 1 in order") {
  auto mk = [](double useful, int id) { return json{{"review_id", id}, {"useful", useful}}; };
  const std::vector<json> reviews = {mk(0, 1), mk(1, 2), mk(3, 3)};
  const auto kept = select_reviews(reviews);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0]["review_id"] == 2);
  CHECK(kept[1]["review_id"] == 3);

  CHECK(select_reviews({mk(0, 1), mk(0, 2)}).empty());

  // independent count over a larger mixed batch
  std::vector<json> batch;
  int expected = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = (i * 7) % 5 - 1;  // -1..3
    batch.push_back(mk(u, i));
    if (u >= 1) ++expected;
  }
  CHECK(select_reviews(batch).size() == static_cast<std::size_t>(expected));
}

TEST_CASE("parse_review_ratings reads hotel sentences") {
  const std::string text =
      "The hotel has a rating of 4 for quality. Rooms are clean.\n"
      "The hotel has a rating of 5 for location. Central.\n"
      "The hotel has a rating of 2 for average service. Mixed.\n"
      "The hotel has a rating of 4 for safety. Fine.";
  const auto r = parse_review_ratings(text, Category::hotel);
  CHECK(r.at("quality") == 4);
  CHECK(r.at("location") == 5);
  CHECK(r.at("service") == 2);
  CHECK(r.at("safety") == 4);
}

TEST_CASE("parse_review_ratings reads attraction sentences") {
  const std::string text =
      "This place has a family oriented level 3. Fun for kids.\n"
      "This place has a history oriented level 1. Not much history.\n"
      "This place has an activity oriented level 2. Moderate.\n"
      "This place has a nature oriented level 2. Riverside.\n"
      "This place has a food oriented level 3. Food trucks.\n"
      "This place has a shopping oriented level 1. Few vendors.";
  const auto r = parse_review_ratings(text, Category::attraction);
  CHECK(r.at("family") == 3);
  CHECK(r.at("history") == 1);
  CHECK(r.at("activity") == 2);
  CHECK(r.at("nature") == 2);
  CHECK(r.at("food") == 3);
  CHECK(r.at("shopping") == 1);
}

TEST_CASE("parse_review_ratings reads restaurant sentences and ignores extras") {
  const std::string text =
      "This place has a rating of 4 for flavor.\n"
      "This place has a rating of 4 for freshness.\n"
      "This place has a rating of 3 for service.\n"
      "This place has a rating of 5 for environment.\n"
      "This place has a rating of 3 for value.\n"
      "This place has a rating of 5 for parking.";  // outside the expected set
  const auto r = parse_review_ratings(text, Category::restaurant);
  CHECK(r.size() == 5);
  CHECK(r.at("environment") == 5);
}

TEST_CASE("parse_review_ratings errors name the problem attribute") {
  const std::string partial =
      "The hotel has a rating of 4 for quality.\n"
      "The hotel has a rating of 5 for location.\n"
      "The hotel has a rating of 4 for service.";
  CHECK_THROWS_WITH(parse_review_ratings(partial, Category::hotel),
                    Catch::Matchers::ContainsSubstring("safety"));

  const std::string out_of_scale =
      "This place has a family oriented level 9. This place has a history oriented level 1. "
      "This place has an activity oriented level 1. This place has a nature oriented level 1. "
      "This place has a food oriented level 1. This place has a shopping oriented level 1.";
  CHECK_THROWS_WITH(parse_review_ratings(out_of_scale, Category::attraction),
                    Catch::Matchers::ContainsSubstring("family"));
}

TEST_CASE("filter_pool applies conjunctive thresholds") {
  PreferenceQuery q;
  q.days = 2;
  q.budget = Budget::moderate;
  q.orientation = "nature";
  q.cuisine = "Japanese";
  q.restaurant_prefs = {"flavor"};
  q.hotel_prefs = {"location", "service"};

  BusinessPool pool;
  pool.businesses = {
      make_business(Category::hotel, 2, {{"quality", 3}, {"location", 5}, {"service", 3}, {"safety", 4}}),
      make_business(Category::hotel, 2, {{"quality", 4}, {"location", 4}, {"service", 5}, {"safety", 4}}),
      make_business(Category::restaurant, 2, {{"flavor", 4}, {"freshness", 4}, {"service", 4}, {"environment", 4}, {"value", 4}},
                    {"Japanese"}),
      make_business(Category::attraction, 2, {{"nature", 2}, {"family", 1}}),
  };
  pool.businesses[0].id = "h_bad";
  pool.businesses[1].id = "h_good";
  pool.businesses[2].id = "r_good";
  pool.businesses[3].id = "a_good";
  for (auto& b : pool.businesses) b.name = b.id;

  const auto filtered = filter_pool(pool, q);
  CHECK(filtered.businesses.size() == 3);
  CHECK(filtered.find_id("h_bad") == nullptr);  // service=3 fails the conjunction
  CHECK(filtered.find_id("h_good") != nullptr);
}

TEST_CASE("filter_pool matches cuisine on either slot") {
  PreferenceQuery q;
  q.budget = Budget::expensive;
  q.orientation = "history";
  q.cuisine = "Thai";
  q.restaurant_prefs = {"flavor"};
  q.hotel_prefs = {"quality"};

  BusinessPool pool;
  pool.businesses = {
      make_business(Category::hotel, 4, {{"quality", 4}, {"location", 4}, {"service", 4}, {"safety", 4}}),
      make_business(Category::restaurant, 3, {{"flavor", 4}, {"freshness", 4}, {"service", 4}, {"environment", 4}, {"value", 4}},
                    {"Japanese", "Thai"}),
      make_business(Category::attraction, 3, {{"history", 3}}),
  };
  int i = 0;
  for (auto& b : pool.businesses) {
    b.id = "b" + std::to_string(i++);
    b.name = b.id;
  }
  const auto filtered = filter_pool(pool, q);
  CHECK(filtered.businesses.size() == 3);
}

TEST_CASE("filter_pool reports the infeasible category") {
  PreferenceQuery q;
  q.budget = Budget::cheap;
  q.orientation = "nature";
  q.cuisine = "Greek";
  q.restaurant_prefs = {"value"};
  q.hotel_prefs = {"safety"};

  BusinessPool pool;
  pool.businesses = {
      make_business(Category::hotel, 1, {{"quality", 4}, {"location", 4}, {"service", 4}, {"safety", 4}}),
      make_business(Category::restaurant, 1, {{"flavor", 4}, {"freshness", 4}, {"service", 4}, {"environment", 4}, {"value", 4}},
                    {"Greek"}),
      make_business(Category::attraction, 1, {{"nature", 1}}),  // below the orientation threshold
  };
  int i = 0;
  for (auto& b : pool.businesses) {
    b.id = "b" + std::to_string(i++);
    b.name = b.id;
  }
  CHECK_THROWS_WITH(filter_pool(pool, q), Catch::Matchers::ContainsSubstring("attraction"));
}

TEST_CASE("missing price fails every budget filter") {
  const Preference budget{Preference::Kind::budget, "moderate"};
  const auto b = make_business(Category::hotel, std::nullopt,
                               {{"quality", 5}, {"location", 5}, {"service", 5}, {"safety", 5}});
  CHECK_FALSE(satisfies(b, budget, {}));
}

TEST_CASE("filter_pool is idempotent and a subset of its input") {
  PreferenceQuery q = sample_query(42);
  BusinessPool pool;
  Rng rng(99);
  // random pool with enough structure that something survives
  for (int i = 0; i < 120; ++i) {
    const Category c = static_cast<Category>(i % 3);
    AttributeRatings attrs;
    for (const auto& a : attribute_names(c)) {
      const auto [lo, hi] = attribute_scale(c);
      attrs[a] = lo + static_cast<int>(uniform_index(rng, static_cast<std::size_t>(hi - lo + 1)));
    }
    auto b = make_business(c, 1 + static_cast<int>(uniform_index(rng, 4)), attrs);
    if (c == Category::restaurant) b.cuisines = {cuisine_names()[uniform_index(rng, 14)]};
    b.id = "p" + std::to_string(i);
    b.name = b.id;
    pool.businesses.push_back(b);
  }
  // guarantee feasibility
  {
    AttributeRatings h;
    for (const auto& a : hotel_attribute_names()) h[a] = 5;
    auto hb = make_business(Category::hotel, budget_tiers(q.budget)[0], h);
    hb.id = "sure_h";
    hb.name = hb.id;
    pool.businesses.push_back(hb);
    AttributeRatings r;
    for (const auto& a : restaurant_attribute_names()) r[a] = 5;
    auto rb = make_business(Category::restaurant, budget_tiers(q.budget)[0], r, {q.cuisine});
    rb.id = "sure_r";
    rb.name = rb.id;
    pool.businesses.push_back(rb);
    auto ab = make_business(Category::attraction, budget_tiers(q.budget)[0], {{q.orientation, 3}});
    ab.id = "sure_a";
    ab.name = ab.id;
    pool.businesses.push_back(ab);
  }

  const auto once = filter_pool(pool, q);
  const auto twice = filter_pool(once, q);
  CHECK(once.businesses.size() == twice.businesses.size());
  // subset + predicates re-checked independently
  const auto prefs = preferences_of(q);
  for (const auto& b : once.businesses) {
    CHECK(pool.find_id(b.id) != nullptr);
    for (const auto& p : applicable_preferences(prefs, b.category)) {
      CHECK(satisfies(b, p, {}));
    }
  }
}

TEST_CASE("pool round-trips through JSON") {
  const auto pool = ingest_base(minimal_records(), {});
  const json j = pool;
  const auto back = j.get<BusinessPool>();
  REQUIRE(back.businesses.size() == pool.businesses.size());
  CHECK(back.businesses[0].id == pool.businesses[0].id);
  CHECK(back.businesses[0].category == pool.businesses[0].category);
  CHECK(json(back) == j);
}
