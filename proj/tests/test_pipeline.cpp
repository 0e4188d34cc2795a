#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "tripbench/pipeline.hpp"

using namespace tripbench;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tripbench_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small synthetic city shared by the pipeline tests.
IngestArtifacts sample_ingest(const fs::path& dir) {
  SynthConfig cfg;
  cfg.hotels_per_tier = 4;
  cfg.hotel_distractors_per_tier = 2;
  cfg.restaurants_per_cuisine_tier = 1;
  cfg.restaurant_distractors = 40;
  cfg.attractions_per_orientation_tier = 17;
  write_sample_city(dir, 7, cfg);
  return run_ingest(dir / "base.jsonl", dir / "attributes.jsonl");
}

}  // namespace

TEST_CASE("synthetic city ingests with noise filtered out") {
  const auto dir = temp_dir("ingest");
  const auto artifacts = sample_ingest(dir);
  const auto& pool = artifacts.pool;
  CHECK(pool.by_category(Category::hotel).size() == 24);
  CHECK(pool.by_category(Category::attraction).size() == 6 * 4 * 17);
  CHECK(pool.find_id("noise_airport") == nullptr);
  CHECK(pool.find_id("noise_closed") == nullptr);
  CHECK_FALSE(artifacts.warnings.empty());  // the nameless record

  // every business carries a full attribute map in range
  for (const auto& b : pool.businesses) {
    const auto [lo, hi] = attribute_scale(b.category);
    CHECK(b.attributes.size() == attribute_names(b.category).size());
    for (const auto& [name, level] : b.attributes) {
      CHECK(level >= lo);
      CHECK(level <= hi);
    }
  }
}

TEST_CASE("ingest caps restaurants by review count") {
  const auto dir = temp_dir("cap");
  SynthConfig cfg;
  cfg.restaurant_distractors = 600;
  write_sample_city(dir, 3, cfg);
  const auto artifacts = run_ingest(dir / "base.jsonl", dir / "attributes.jsonl");
  CHECK(artifacts.pool.by_category(Category::restaurant).size() == 500);
  // coverage restaurants have boosted counts and must survive
  for (const auto& b : artifacts.pool.businesses) {
    if (b.category == Category::restaurant && b.id.rfind("rest_c", 0) == 0) {
      CHECK(b.review_count >= 100000);
    }
  }
  std::size_t coverage = 0;
  for (const auto& b : artifacts.pool.businesses) {
    coverage += b.category == Category::restaurant && b.id.rfind("rest_c", 0) == 0;
  }
  CHECK(coverage == 14 * 4);
}

TEST_CASE("pool file round-trips") {
  const auto dir = temp_dir("poolio");
  const auto artifacts = sample_ingest(dir);
  save_pool(dir / "pool.json", artifacts.pool, {{"seed", 7}});
  const auto loaded = load_pool(dir / "pool.json");
  CHECK(loaded.businesses.size() == artifacts.pool.businesses.size());
  CHECK(nlohmann::json(loaded) == nlohmann::json(artifacts.pool));
}

TEST_CASE("query files round-trip") {
  const auto dir = temp_dir("queries");
  const auto queries = generate_queries(0, 25);
  save_queries(dir / "queries.json", queries);
  const auto loaded = load_queries(dir / "queries.json");
  REQUIRE(loaded.size() == 25);
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(loaded[i] == queries[i]);
    CHECK(loaded[i].seed == queries[i].seed);
  }
}

TEST_CASE("greedy pipeline hits the deterministic baseline row") {
  const auto dir = temp_dir("greedy");
  const auto artifacts = sample_ingest(dir);
  const auto queries = generate_queries(0, 12);
  const auto solved = solve_batch(artifacts.pool, queries, PlanSource::greedy);
  REQUIRE(solved.skipped.empty());
  REQUIRE(solved.plans.size() == 12);

  const auto batch = assemble_batch(artifacts.pool, queries, solved.plans);
  const auto report = build_report(batch);
  CHECK(report.oop_pct == 0.0);
  CHECK(report.mi_pct == 0.0);
  CHECK(report.micro_pct == 100.0);
  CHECK(report.macro_pct == 100.0);
  CHECK(report.vr_pct == 100.0);
  CHECK(report.arg_signed == 0.0);
  CHECK(report.arg_pct == 0.0);
  CHECK(report.arg_mean_per_day == 4.0);
  REQUIRE(report.dg_pct.has_value());
  REQUIRE(report.total_dg_pct.has_value());
  CHECK(*report.dg_pct >= 0.0);
  CHECK(*report.total_dg_pct >= 0.0);
  CHECK(report.source_label == "greedy");
}

TEST_CASE("exact solvers score a perfect spatial row") {
  const auto dir = temp_dir("exact");
  const auto artifacts = sample_ingest(dir);
  const auto queries = generate_queries(100, 6);
  for (PlanSource solver : {PlanSource::heldkarp, PlanSource::astar}) {
    const auto solved = solve_batch(artifacts.pool, queries, solver);
    REQUIRE(solved.skipped.empty());
    const auto report = build_report(assemble_batch(artifacts.pool, queries, solved.plans));
    REQUIRE(report.dg_pct.has_value());
    REQUIRE(report.total_dg_pct.has_value());
    REQUIRE(report.ecj_pct.has_value());
    CHECK(*report.dg_pct == 0.0);
    CHECK(*report.total_dg_pct == 0.0);
    CHECK(*report.ecj_pct == 0.0);
    CHECK(report.vr_pct == 100.0);
  }
}

TEST_CASE("plan directories round-trip through manifests") {
  const auto dir = temp_dir("plans");
  const auto artifacts = sample_ingest(dir);
  const auto queries = generate_queries(5, 4);
  const auto solved = solve_batch(artifacts.pool, queries, PlanSource::greedy);
  save_plans(dir / "plans", solved, "greedy", {{"solver", "greedy"}});

  const auto loaded = load_plans(dir / "plans");
  REQUIRE(loaded.size() == 4);
  CHECK(loaded[0].source == PlanSource::greedy);

  const auto report = evaluate_dir(dir / "plans", artifacts.pool, queries);
  CHECK(report.vr_pct == 100.0);

  CHECK_THROWS_AS(load_plans(dir / "missing"), InvalidInputError);
}

TEST_CASE("geojson has one line per day and one point per poi") {
  const auto dir = temp_dir("viz");
  const auto artifacts = sample_ingest(dir);
  PreferenceQuery q = generate_queries(0, 3)[2];
  q.days = 2;
  const auto filtered = filter_pool(artifacts.pool, q);
  auto plan = check_failures(greedy_plan(filtered, q), filtered);

  const auto geo = plan_geojson(plan, filtered, 0);
  CHECK(geo["type"] == "FeatureCollection");
  int lines = 0;
  int points = 0;
  int hulls = 0;
  std::set<std::string> poi_names;
  for (const auto& f : geo["features"]) {
    const std::string type = f["geometry"]["type"];
    if (type == "LineString") ++lines;
    if (type == "Point") {
      ++points;
      poi_names.insert(f["properties"]["name"].get<std::string>());
    }
    if (type == "Polygon") ++hulls;
  }
  CHECK(lines == 2);
  CHECK(points == static_cast<int>(poi_names.size()));  // unique POIs only

  // count distinct businesses the plan references
  std::set<std::string> expect;
  for (const auto& d : plan.days) {
    for (const SlotEntry* e : {&d.accommodation, &d.breakfast, &d.lunch, &d.dinner}) {
      if (e->resolved) expect.insert(*e->resolved);
    }
    for (const auto* e : d.attraction_sequence()) {
      if (e->resolved) expect.insert(*e->resolved);
    }
  }
  CHECK(points == static_cast<int>(expect.size()));
}

TEST_CASE("agent batch over the mock client produces evaluable plans") {
  const auto dir = temp_dir("agent");
  const auto artifacts = sample_ingest(dir);
  auto queries = generate_queries(0, 2);

  // scripts keyed by query: search everything, cluster, then plan
  auto make_script = [&](const PreferenceQuery& q) -> std::vector<std::string> {
    const auto filtered = filter_pool(artifacts.pool, q);
    // craft a 1-day plan document from the filtered pool
    const auto plan = greedy_plan(filtered, q);
    const std::string plan_json = itinerary_to_document(plan).dump();
    std::ostringstream hotel_call;
    hotel_call << "AccommodationSearch[" << to_string(q.budget) << " Budget,[";
    for (std::size_t i = 0; i < q.hotel_prefs.size(); ++i) {
      hotel_call << (i ? ", " : "") << "Good " << q.hotel_prefs[i];
    }
    hotel_call << "]]";
    std::ostringstream attraction_call;
    attraction_call << "AttractionSearch[" << to_string(q.budget) << " Budget,[" << q.orientation
                    << " Oriented]]";
    return {hotel_call.str(), attraction_call.str(), "BusinessClusterSearch[]",
            "Planner[" + render_query_text(q) + "]", "plan prose goes here", plan_json};
  };
  std::vector<std::vector<std::string>> scripts;
  for (const auto& q : queries) scripts.push_back(make_script(q));

  const auto result = run_agent_batch(
      4, artifacts.pool, queries,
      [&](std::size_t i) { return std::make_unique<MockChatClient>(scripts[i]); });
  REQUIRE(result.failures.empty());
  REQUIRE(result.episodes.size() == 2);
  CHECK(delivery_rate(result.episodes) == 100.0);
  REQUIRE(result.plans.size() == 2);
  CHECK(result.plans[0].source == PlanSource::llm_task4);

  const auto report = build_report(assemble_batch(artifacts.pool, queries, result.plans));
  CHECK(report.oop_pct == 0.0);
  CHECK(report.plan_count == 2);
}

TEST_CASE("single-turn task batch flows through extraction") {
  const auto dir = temp_dir("task2");
  const auto artifacts = sample_ingest(dir);
  auto queries = generate_queries(40, 1);
  const auto filtered = filter_pool(artifacts.pool, queries[0]);
  const std::string plan_json = itinerary_to_document(greedy_plan(filtered, queries[0])).dump();
  const auto result = run_agent_batch(
      2, artifacts.pool, queries, [&](std::size_t) {
        return std::make_unique<MockChatClient>(
            std::vector<std::string>{"Here is the plan prose.", plan_json});
      });
  REQUIRE(result.failures.empty());
  REQUIRE(result.plans.size() == 1);
  CHECK(result.plans[0].source == PlanSource::llm_task2);
  // task 2 evaluates against the full pool
  const auto batch = assemble_batch(artifacts.pool, queries, result.plans);
  CHECK(batch.plans[0].pool->businesses.size() == artifacts.pool.businesses.size());
}

TEST_CASE("config hashes are stable and order-sensitive") {
  const nlohmann::json a{{"seed", 1}, {"solver", "greedy"}};
  const nlohmann::json b{{"seed", 2}, {"solver", "greedy"}};
  CHECK(config_hash(a) == config_hash(a));
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}
