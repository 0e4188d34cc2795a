#pragma once

// Orchestration shared by the CLI and the integration tests: file formats,
// batch solving, batch evaluation, and artifact stamping.

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/agent.hpp"
#include "tripbench/dataset.hpp"
#include "tripbench/metrics.hpp"
#include "tripbench/plan_model.hpp"
#include "tripbench/solvers.hpp"
#include "tripbench/synth.hpp"
#include "tripbench/viz.hpp"

namespace tripbench {

// ---- small file helpers ----------------------------------------------------

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << content;
}

inline std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::vector<nlohmann::json> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      records.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& records) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  for (const auto& r : records) out << r.dump() << "\n";
}

// FNV-1a over the canonical JSON dump; stamps artifacts with the config that
// produced them.
inline std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

// ---- ingestion --------------------------------------------------------------

// Join the parallel attributes file onto an ingested pool. Records may carry
// numeric ratings directly or the extraction-text form.
inline void attach_attributes(BusinessPool& pool, const std::vector<nlohmann::json>& records,
                              std::vector<std::string>* warnings = nullptr) {
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pool.businesses.size(); ++i) index[pool.businesses[i].id] = i;

  for (const auto& rec : records) {
    const std::string id = rec.value("business_id", std::string());
    const auto it = index.find(id);
    if (it == index.end()) continue;  // attribute rows for filtered-out businesses are normal
    Business& b = pool.businesses[it->second];
    try {
      if (rec.contains("extraction_text")) {
        b.attributes = parse_review_ratings(rec["extraction_text"].get<std::string>(), b.category);
        continue;
      }
      if (!rec.contains("ratings") || !rec["ratings"].is_object()) {
        warn("attributes: record for " + id + " has neither ratings nor extraction_text");
        continue;
      }
      const auto [lo, hi] = attribute_scale(b.category);
      AttributeRatings ratings;
      for (const auto& name : attribute_names(b.category)) {
        if (!rec["ratings"].contains(name)) continue;
        const int v = rec["ratings"][name].get<int>();
        if (v < lo || v > hi) {
          throw ParseError("attribute '" + name + "' value " + std::to_string(v) + " out of scale");
        }
        ratings[name] = v;
      }
      b.attributes = std::move(ratings);
    } catch (const std::exception& e) {
      warn("attributes: skipped record for " + id + ": " + e.what());
    }
  }
}

struct IngestArtifacts {
  BusinessPool pool;
  std::vector<std::string> warnings;
};

inline IngestArtifacts run_ingest(const std::filesystem::path& base_path,
                                  const std::filesystem::path& attrs_path,
                                  const IngestConfig& config = {}) {
  IngestArtifacts out;
  out.pool = ingest_base(read_jsonl(base_path), config, &out.warnings);
  attach_attributes(out.pool, read_jsonl(attrs_path), &out.warnings);
  return out;
}

inline void save_pool(const std::filesystem::path& path, const BusinessPool& pool,
                      const nlohmann::json& config = {}) {
  nlohmann::json j = pool;
  j["config_hash"] = config_hash(config);
  write_text_file(path, j.dump(2) + "\n");
}

inline BusinessPool load_pool(const std::filesystem::path& path) {
  return nlohmann::json::parse(read_text_file(path)).get<BusinessPool>();
}

// ---- queries ----------------------------------------------------------------

inline std::vector<PreferenceQuery> generate_queries(std::uint64_t seed_start, std::size_t count) {
  std::vector<PreferenceQuery> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample_query(seed_start + i));
  return out;
}

// Query file: a plain JSON array of query objects (seed + fields + text).
inline void save_queries(const std::filesystem::path& path, const std::vector<PreferenceQuery>& queries) {
  write_text_file(path, nlohmann::json(queries).dump(2) + "\n");
}

inline std::vector<PreferenceQuery> load_queries(const std::filesystem::path& path) {
  const auto j = nlohmann::json::parse(read_text_file(path));
  const auto& arr = j.is_array() ? j : j.at("queries");
  return arr.get<std::vector<PreferenceQuery>>();
}

// ---- solving ------------------------------------------------------------------

struct SolveResult {
  std::vector<Itinerary> plans;
  std::vector<std::pair<std::uint64_t, std::string>> skipped;  // seed -> reason
};

inline PlanSource solver_from_string(const std::string& s) {
  if (s == "greedy") return PlanSource::greedy;
  if (s == "heldkarp") return PlanSource::heldkarp;
  if (s == "astar") return PlanSource::astar;
  throw InvalidInputError("solver must be greedy, heldkarp or astar");
}

inline SolveResult solve_batch(const BusinessPool& pool, const std::vector<PreferenceQuery>& queries,
                               PlanSource solver, const FilterConfig& thresholds = {}) {
  SolveResult result;
  for (const auto& q : queries) {
    try {
      const auto filtered = filter_pool(pool, q, thresholds);
      result.plans.push_back(solver == PlanSource::greedy ? greedy_plan(filtered, q)
                                                          : optimized_plan(filtered, q, solver));
    } catch (const Error& e) {
      result.skipped.push_back({q.seed, e.what()});
    }
  }
  return result;
}

// Plan files use the extraction schema (a bare array of days); batch metadata
// lives in the manifest next to them.
inline void save_plans(const std::filesystem::path& dir, const SolveResult& result,
                       const std::string& source_label, const nlohmann::json& config) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest{{"source", source_label},
                          {"config_hash", config_hash(config)},
                          {"entries", nlohmann::json::array()},
                          {"skipped", nlohmann::json::array()}};
  for (const auto& plan : result.plans) {
    const std::string file = "plan_" + plan.query_ref + ".json";
    write_text_file(dir / file, itinerary_to_document(plan).dump(2) + "\n");
    manifest["entries"].push_back({{"query_ref", plan.query_ref}, {"file", file}});
  }
  for (const auto& [seed, reason] : result.skipped) {
    manifest["skipped"].push_back({{"seed", seed}, {"reason", reason}});
  }
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---- evaluation -----------------------------------------------------------------

// The pool each generator saw: preference-filtered for the solvers and the
// filtered-data task, the full pool otherwise.
inline bool uses_filtered_pool(PlanSource source) {
  switch (source) {
    case PlanSource::greedy:
    case PlanSource::astar:
    case PlanSource::heldkarp:
    case PlanSource::llm_task3: return true;
    default: return false;
  }
}

inline EvaluationBatch assemble_batch(const BusinessPool& pool,
                                      const std::vector<PreferenceQuery>& queries,
                                      std::vector<Itinerary> plans, const MetricConfig& config = {}) {
  std::map<std::string, const PreferenceQuery*> by_ref;
  for (const auto& q : queries) by_ref[q.id()] = &q;

  auto full = std::make_shared<const BusinessPool>(pool);
  EvaluationBatch batch;
  batch.config = config;
  for (auto& plan : plans) {
    const auto it = by_ref.find(plan.query_ref);
    if (it == by_ref.end()) {
      throw InvalidInputError("evaluate: no query with id " + plan.query_ref);
    }
    const PreferenceQuery& q = *it->second;
    std::shared_ptr<const BusinessPool> generator_pool = full;
    if (uses_filtered_pool(plan.source)) {
      generator_pool = std::make_shared<const BusinessPool>(
          filter_pool(pool, q, config.thresholds));
    }
    Itinerary checked = check_failures(std::move(plan), *generator_pool);
    batch.plans.push_back({std::move(checked), q, generator_pool});
  }
  return batch;
}

inline std::vector<Itinerary> load_plans(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) {
    throw InvalidInputError("evaluate: no manifest.json in " + dir.string());
  }
  const auto manifest = nlohmann::json::parse(read_text_file(manifest_path));
  const auto source = plan_source_from_string(manifest.at("source").get<std::string>());
  std::vector<Itinerary> plans;
  for (const auto& entry : manifest.at("entries")) {
    const auto doc = nlohmann::json::parse(read_text_file(dir / entry.at("file").get<std::string>()));
    Itinerary plan = parse_itinerary(doc);
    plan.source = source;
    plan.query_ref = entry.at("query_ref").get<std::string>();
    plans.push_back(std::move(plan));
  }
  return plans;
}

inline MetricReport evaluate_dir(const std::filesystem::path& plans_dir, const BusinessPool& pool,
                                 const std::vector<PreferenceQuery>& queries,
                                 const MetricConfig& config = {}) {
  auto plans = load_plans(plans_dir);
  if (plans.empty()) throw EmptyBatchError("evaluate: no plans in " + plans_dir.string());
  return build_report(assemble_batch(pool, queries, std::move(plans), config));
}

inline void save_report(const std::filesystem::path& json_path, const MetricReport& report,
                        const nlohmann::json& config) {
  nlohmann::json j = report;
  j["config_hash"] = config_hash(config);
  write_text_file(json_path, j.dump(2) + "\n");
}

// ---- agent batches ------------------------------------------------------------

struct AgentBatchResult {
  std::vector<Episode> episodes;      // task 4
  std::vector<Itinerary> plans;       // delivered/parseable plans, any task
  std::vector<nlohmann::json> transcripts;
  std::vector<std::pair<std::uint64_t, std::string>> failures;
};

inline AgentBatchResult run_agent_batch(int task_id, const BusinessPool& pool,
                                        const std::vector<PreferenceQuery>& queries,
                                        const std::function<std::unique_ptr<ChatClient>(std::size_t)>&
                                            client_factory,
                                        const AgentConfig& cfg = {}) {
  const TaskSpec spec = task_spec(task_id);
  const PlanSource source = static_cast<PlanSource>(static_cast<int>(PlanSource::llm_task1) +
                                                    (task_id - 1));
  AgentBatchResult result;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    auto client = client_factory(i);
    try {
      const BusinessPool task_pool =
          spec.filtered_pool ? filter_pool(pool, q, cfg.thresholds) : pool;
      nlohmann::json document;
      if (spec.tool_use) {
        Episode episode = run_react_episode(q, task_pool, *client, cfg);
        nlohmann::json transcript = episode;
        transcript["task"] = task_id;
        result.transcripts.push_back(transcript);
        if (episode.outcome == EpisodeOutcome::delivered && episode.extraction_error.empty()) {
          document = episode.plan_document;
        }
        result.episodes.push_back(std::move(episode));
      } else {
        const auto task_result = run_plan_task(spec, q, task_pool, *client, cfg);
        document = task_result.plan_document;
        result.transcripts.push_back(nlohmann::json{{"task", task_id},
                                                    {"query", q},
                                                    {"plan_text", task_result.plan_text},
                                                    {"extraction_text", task_result.extraction_text},
                                                    {"plan_document", document}});
      }
      if (!document.is_null()) {
        Itinerary plan = parse_itinerary(document);
        plan.source = source;
        plan.query_ref = q.id();
        result.plans.push_back(std::move(plan));
      }
    } catch (const std::exception& e) {
      result.failures.push_back({q.seed, e.what()});
    }
  }
  return result;
}

// ---- sample data ----------------------------------------------------------------

inline void write_sample_city(const std::filesystem::path& dir, std::uint64_t seed,
                              const SynthConfig& cfg = {}) {
  const auto data = make_sample_city(seed, cfg);
  write_jsonl(dir / "base.jsonl", data.base_records);
  write_jsonl(dir / "attributes.jsonl", data.attribute_records);
}

}  // namespace tripbench
