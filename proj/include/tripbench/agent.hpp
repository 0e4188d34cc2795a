#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/chat_client.hpp"
#include "tripbench/clustering.hpp"
#include "tripbench/dataset.hpp"
#include "tripbench/plan_model.hpp"
#include "tripbench/querygen.hpp"
#include "tripbench/text.hpp"

namespace tripbench {

// ---- prompt templates -----------------------------------------------------

namespace prompts {

inline constexpr const char* kPlanExample = R"(----- Example Starts -----

Query: I am planning a 2-day trip with an expensive budget. I would like to visit some history-oriented attractions. Please recommend Japanese restaurants with a good environment. For accommodation, I am looking for a hotel with good location, good quality, and good service.

Travel Plan:

Day X:

- Accommodation:
  - Name: XXXX
    Address: XXXX, XXXX

- Breakfast:
  - Name: XXXX
    Address: XXXX, XXXX

- Morning Attraction:
  - Name: XXXX
    Address: XXXX, XXXX

- Lunch:
  - Name: XXXX
    Address: XXXX, XXXX

- Afternoon Attraction:
  - Name: XXXX
    Address: XXXX, XXXX;
  - Name: XXXX
    Address: XXXX, XXXX

- Dinner:
  - Name: XXXX
    Address: XXXX, XXXX

- Night Attraction:
  - Name: XXXX

----- Example Ends -----

Given Information: {given_information}

Query: {query}

Travel Plan:
)";

inline std::string plan_template(bool route_optimization) {
  std::string head =
      "You are a proficient travel planner. Based on the given information and query, you will "
      "generate a travel plan like the following example. Ensure that all recommendations and "
      "their addresses are organized in chronological order for each day. Give exactly 4 "
      "attraction recommendations for each day. Be considerate, concise and well-structured.";
  if (route_optimization) {
    head +=
        " Please also optimize the routes for the trip. For each day, find attractions that are "
        "close to each other for the recommendations.";
  }
  return head + "\n\n" + kPlanExample;
}

inline constexpr const char* kReactTemplate = R"(Collect information for a query plan using interleaving 'Thought', 'Action', and 'Observation' steps. Ensure you gather valid information related to transportation, dining, attractions, and accommodation. All information should be written in Notebook, which will then be input into the Planner tool. Note that the nested use of tools is prohibited. Don't include phrases like "Action: ", "Action 5", "Thought 1", or "Thought: "in your response. 'Thought' can reason about the current situation, and 'Action' can have 5 different types:

(1) AccommodationSearch[Budget,Preference]:

Description: Find the accommodation that matches the preference.

Parameters:

Budget: The budget mentioned in the query.

Preference: A list of preferences mentioned in the query.

Example: AccommodationSearch[Moderate Budget,[Good Location, Good Service]] would return the moderate price hotel that has a good or excellent location, as well as a good or excellent service.

(2) AttractionSearch[Budget, Preference]:

Description: Find the attractions that matches the preference.

Parameters:

Budget: The budget mentioned in the query.

Preference: A list of preferences mentioned in the query.

Example: AttractionSearch[Cheap budget,[Nature Oriented]] would return the cheap price and nature - oriented attractions.

(3) RestaurantSearch[Budget, Cuisine, Preference]:

Description: Find the restaurants that matches the preference.

Parameters:

Budget: The budget mentioned in the query.

Cuisine: The cuisine mentioned in the query.

Preference: A list of preferences mentioned in the query.

Example: RestaurantSearch[Expensive budget, Vietnamese, [Good Flavor, Good Value]] would return the expensive restaurants that offer Vietnamese cuisine, with good or excellent flavor and good or excellent value.

(4) BusinessClusterSearch[]:

Description: A tool that finds the number of business clusters given the information that you've collected. The tool will choose what business to be considered and return their spatial clustering information.

Example: BusinessClusterSearch[] would return you a list of business clusters among some attractions and hotels that you've collected. The businesses in the same cluster indicates that they are closer to each other and prefered to be arranged for the same day of the travel.

(5) Planner[Query]

Description: A smart planning tool that crafts detailed plans based on user input and the information stored in Notebook.

Parameters:

Query: The query from user.

Example: Planner[Give me a 3-day trip plan in Philadelphia] would return a detailed 3-day trip plan.

You should use as many as possible steps to collect engough information to input to the Planner tool.

Each action only calls one function once. Do not add any description in the action. Do not start action with "1. ", state the action directly.

Query: {query}{scratchpad})";

inline constexpr const char* kExtractionTemplate = R"(Extract the travel itinerary and parse the businesses' information into the JSON format as below. Be faithful and concise. Correctly document the right number of the attractions. Only write down the name and address of the businesses. If certain recommendations (like meals or accommodations) are not provided, replace the information with "-" for name and address. If recommendations for a session of attraction is not provided, replace the information as an empty array.

[
  {
    "accommodation": {"name": "XXXX", "address": "XXXX"},
    "breakfast": {"name": "XXXX", "address": "XXXX"},
    "morning_attractions": [{"name": "XXXX", "address": "XXXX"}],
    "lunch": {"name": "XXXX", "address": "XXXX"},
    "afternoon_attractions": [{"name": "XXXX", "address": "XXXX"}, {"name": "XXXX", "address": "XXXX"}],
    "dinner": {"name": "XXXX", "address": "XXXX"},
    "night_attractions": [{"name": "XXXX", "address": "XXXX"}]
  }
]

Travel plan: {plan}

JSON:
)";

inline std::string fill(std::string tpl, const std::string& key, const std::string& value) {
  const std::string token = "{" + key + "}";
  std::size_t pos = 0;
  while ((pos = tpl.find(token, pos)) != std::string::npos) {
    tpl.replace(pos, token.size(), value);
    pos += value.size();
  }
  return tpl;
}

}  // namespace prompts

// ---- task specs -----------------------------------------------------------

struct TaskSpec {
  int task_id = 1;
  bool filtered_pool = false;      // the caller passes filter_pool output
  bool route_optimization = false;
  bool tool_use = false;
};

inline TaskSpec task_spec(int task_id) {
  switch (task_id) {
    case 1: return {1, false, false, false};
    case 2: return {2, false, true, false};
    case 3: return {3, true, true, false};
    case 4: return {4, false, true, true};
  }
  throw InvalidInputError("task id must be 1..4");
}

struct AgentConfig {
  std::string model = "mock";
  double temperature = 1.0;
  int max_steps = 30;
  int dead_loop_repeats = 3;  // identical calls in a row for an argument loop
  int max_cycle_length = 4;   // longest repeating cycle checked for order loops
  std::size_t context_limit_bytes = 4000000;
  FilterConfig thresholds;
  std::uint64_t kmeans_seed = 0;
};

// ---- pool serialization ---------------------------------------------------

namespace detail {

inline void append_business_line(std::ostringstream& out, const Business& b) {
  out << "- Name: " << b.name << "; Address: " << b.address;
  if (b.price) out << "; Price: " << *b.price;
  out << "; Stars: " << b.stars;
  if (!b.cuisines.empty()) {
    out << "; Cuisine: ";
    for (std::size_t i = 0; i < b.cuisines.size(); ++i) {
      if (i > 0) out << ", ";
      out << b.cuisines[i];
    }
  }
  bool first = true;
  for (const auto& attr : attribute_names(b.category)) {
    const auto it = b.attributes.find(attr);
    if (it == b.attributes.end()) continue;
    out << (first ? "; " : ", ") << attr << ": " << it->second;
    first = false;
  }
  out << "\n";
}

}  // namespace detail

inline std::string serialize_pool_text(const BusinessPool& pool) {
  std::ostringstream out;
  const std::pair<Category, const char*> sections[] = {{Category::hotel, "Hotels:"},
                                                       {Category::restaurant, "Restaurants:"},
                                                       {Category::attraction, "Attractions:"}};
  for (const auto& [category, title] : sections) {
    out << title << "\n";
    for (const auto& b : pool.businesses) {
      if (b.category == category) detail::append_business_line(out, b);
    }
    out << "\n";
  }
  return out.str();
}

// Prompt for one task. Tasks 1-3 fill the plan template (task 3 also embeds
// the spatial clusters of the already-filtered pool); task 4 yields the
// ReAct prompt with an empty scratchpad.
inline std::string build_task_prompt(const TaskSpec& spec, const PreferenceQuery& q,
                                     const BusinessPool& pool, const AgentConfig& cfg = {}) {
  std::string prompt;
  if (spec.tool_use) {
    prompt = prompts::fill(prompts::kReactTemplate, "query", render_query_text(q));
    prompt = prompts::fill(std::move(prompt), "scratchpad", "");
  } else {
    std::string given = serialize_pool_text(pool);
    if (spec.filtered_pool) {
      std::vector<Business> items;
      for (const auto& b : pool.businesses) {
        if (b.category != Category::restaurant) items.push_back(b);
      }
      const auto clusters = kmeans_clusters(items, cfg.kmeans_seed);
      given += "Business Clusters:\n" + cluster_summary_text(clusters, items) + "\n";
    }
    prompt = prompts::plan_template(spec.route_optimization);
    prompt = prompts::fill(std::move(prompt), "given_information", given);
    prompt = prompts::fill(std::move(prompt), "query", render_query_text(q));
  }
  if (prompt.size() > cfg.context_limit_bytes) {
    throw ContextOverflowError("prompt of " + std::to_string(prompt.size()) +
                               " bytes exceeds the context limit of " +
                               std::to_string(cfg.context_limit_bytes));
  }
  return prompt;
}

// ---- actions --------------------------------------------------------------

enum class Tool {
  accommodation_search,
  attraction_search,
  restaurant_search,
  business_cluster_search,
  planner,
};

inline const char* to_string(Tool t) {
  switch (t) {
    case Tool::accommodation_search: return "AccommodationSearch";
    case Tool::attraction_search: return "AttractionSearch";
    case Tool::restaurant_search: return "RestaurantSearch";
    case Tool::business_cluster_search: return "BusinessClusterSearch";
    case Tool::planner: return "Planner";
  }
  return "?";
}

struct ToolCall {
  Tool tool = Tool::planner;
  std::optional<Budget> budget;
  std::optional<std::string> cuisine;       // canonical cuisine when recognized
  std::vector<std::string> preferences;     // canonical attribute/orientation keywords
  std::string planner_query;
  std::string raw;

  // Stable serialization used for dead-loop detection.
  std::string canonical() const {
    std::ostringstream out;
    out << to_string(tool) << '[';
    if (budget) out << to_string(*budget);
    out << '|';
    if (cuisine) out << *cuisine;
    out << '|';
    for (std::size_t i = 0; i < preferences.size(); ++i) {
      if (i > 0) out << ',';
      out << preferences[i];
    }
    out << '|' << planner_query << ']';
    return out.str();
  }
};

namespace detail {

// Split "a, b, [c, d]" at depth-zero commas.
inline std::vector<std::string> split_args(const std::string& s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string current;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty() || !parts.empty()) parts.push_back(trim(current));
  return parts;
}

inline std::optional<Budget> canonical_budget(const std::string& raw) {
  const std::string s = to_lower(raw);
  for (Budget b : {Budget::cheap, Budget::moderate, Budget::expensive}) {
    if (s.find(to_string(b)) != std::string::npos) return b;
  }
  return std::nullopt;
}

// "Good Location" -> location, "Nature Oriented" -> nature. Unrecognized
// tokens stay in normalized form and simply never match anything.
inline std::string canonical_preference(const std::string& raw) {
  std::string s = to_lower(trim(raw));
  if (s.rfind("good ", 0) == 0) s = s.substr(5);
  const std::string oriented = " oriented";
  if (s.size() > oriented.size() && s.compare(s.size() - oriented.size(), oriented.size(), oriented) == 0) {
    s = trim(s.substr(0, s.size() - oriented.size()));
  }
  for (const auto* list : {&restaurant_attribute_names(), &hotel_attribute_names(), &orientation_names()}) {
    for (const auto& name : *list) {
      if (s == name) return name;
    }
  }
  return s;
}

inline std::optional<std::string> canonical_cuisine(const std::string& raw) {
  const std::string s = to_lower(trim(raw));
  for (const auto& c : cuisine_names()) {
    if (s == to_lower(c)) return c;
  }
  return std::nullopt;
}

inline std::vector<std::string> parse_pref_list(const std::string& raw) {
  std::string inner = trim(raw);
  if (!inner.empty() && inner.front() == '[' && inner.back() == ']') {
    inner = inner.substr(1, inner.size() - 2);
  }
  std::vector<std::string> out;
  for (const auto& token : split(inner, ',')) {
    const std::string t = trim(token);
    if (!t.empty()) out.push_back(canonical_preference(t));
  }
  return out;
}

}  // namespace detail

// Extract the single tool call from one model turn.
inline ToolCall parse_action(const std::string& model_text) {
  struct Found {
    Tool tool;
    std::size_t at;
    std::size_t args_begin;
  };
  std::vector<Found> found;
  for (Tool tool : {Tool::accommodation_search, Tool::attraction_search, Tool::restaurant_search,
                    Tool::business_cluster_search, Tool::planner}) {
    const std::string needle = std::string(to_string(tool)) + "[";
    for (std::size_t pos = model_text.find(needle); pos != std::string::npos;
         pos = model_text.find(needle, pos + 1)) {
      found.push_back({tool, pos, pos + needle.size()});
    }
  }
  if (found.empty()) throw ParseError("action parse: no tool call found");
  if (found.size() > 1) throw ParseError("action parse: more than one tool call in a single turn");

  const auto& hit = found.front();
  int depth = 1;
  std::size_t end = hit.args_begin;
  while (end < model_text.size() && depth > 0) {
    if (model_text[end] == '[') ++depth;
    if (model_text[end] == ']') --depth;
    ++end;
  }
  if (depth != 0) throw ParseError("action parse: unbalanced brackets");
  const std::string args = model_text.substr(hit.args_begin, end - 1 - hit.args_begin);

  ToolCall call;
  call.tool = hit.tool;
  call.raw = model_text.substr(hit.at, end - hit.at);

  switch (call.tool) {
    case Tool::business_cluster_search:
      if (!trim(args).empty()) throw ParseError("action parse: BusinessClusterSearch takes no arguments");
      break;
    case Tool::planner:
      call.planner_query = trim(args);
      break;
    case Tool::accommodation_search:
    case Tool::attraction_search: {
      const auto parts = detail::split_args(args);
      if (parts.size() != 2) {
        throw ParseError(std::string("action parse: ") + to_string(call.tool) +
                         " expects [Budget, Preference]");
      }
      call.budget = detail::canonical_budget(parts[0]);
      call.preferences = detail::parse_pref_list(parts[1]);
      break;
    }
    case Tool::restaurant_search: {
      const auto parts = detail::split_args(args);
      if (parts.size() != 3) {
        throw ParseError("action parse: RestaurantSearch expects [Budget, Cuisine, Preference]");
      }
      call.budget = detail::canonical_budget(parts[0]);
      call.cuisine = detail::canonical_cuisine(parts[1]);
      if (!call.cuisine) call.cuisine = trim(parts[1]);
      call.preferences = detail::parse_pref_list(parts[2]);
      break;
    }
  }
  return call;
}

// ---- notebook and tool dispatch -------------------------------------------

struct Notebook {
  std::vector<std::string> observations;   // successful tool outputs in order
  std::vector<std::string> business_ids;   // gathered candidates, deduplicated

  bool empty() const { return observations.empty(); }

  std::string text() const {
    std::string out;
    for (const auto& o : observations) {
      out += o;
      if (!o.empty() && o.back() != '\n') out += '\n';
    }
    return out;
  }

  void add_business(const std::string& id) {
    if (std::find(business_ids.begin(), business_ids.end(), id) == business_ids.end()) {
      business_ids.push_back(id);
    }
  }
};

struct ToolContext {
  FilterConfig thresholds;
  std::uint64_t kmeans_seed = 0;
  // Renders a plan from a prompt; backed by the chat client in live episodes.
  std::function<std::string(const std::string& prompt)> planner;
};

namespace detail {

inline Category tool_category(Tool t) {
  switch (t) {
    case Tool::accommodation_search: return Category::hotel;
    case Tool::attraction_search: return Category::attraction;
    case Tool::restaurant_search: return Category::restaurant;
    default: break;
  }
  throw InvalidInputError("not a search tool");
}

inline std::vector<Preference> call_preferences(const ToolCall& call) {
  std::vector<Preference> prefs;
  if (call.budget) prefs.push_back({Preference::Kind::budget, to_string(*call.budget)});
  if (call.tool == Tool::restaurant_search && call.cuisine) {
    prefs.push_back({Preference::Kind::cuisine, *call.cuisine});
  }
  Preference::Kind kind = Preference::Kind::hotel_attr;
  if (call.tool == Tool::attraction_search) kind = Preference::Kind::orientation;
  if (call.tool == Tool::restaurant_search) kind = Preference::Kind::restaurant_attr;
  for (const auto& p : call.preferences) prefs.push_back({kind, p});
  return prefs;
}

}  // namespace detail

// Execute one parsed call. Search results are appended to the notebook;
// failures come back as error observations, never exceptions.
inline std::string dispatch_tool(const ToolCall& call, const BusinessPool& pool, Notebook& notebook,
                                 const ToolContext& ctx) {
  switch (call.tool) {
    case Tool::accommodation_search:
    case Tool::attraction_search:
    case Tool::restaurant_search: {
      const Category category = detail::tool_category(call.tool);
      const auto prefs = detail::call_preferences(call);
      std::ostringstream out;
      int count = 0;
      for (const auto& b : pool.businesses) {
        if (b.category != category) continue;
        const bool keep = std::all_of(prefs.begin(), prefs.end(), [&](const Preference& p) {
          return satisfies(b, p, ctx.thresholds);
        });
        if (!keep) continue;
        detail::append_business_line(out, b);
        notebook.add_business(b.id);
        ++count;
      }
      if (count == 0) return "No matches.";
      const std::string observation = out.str();
      notebook.observations.push_back(observation);
      return observation;
    }
    case Tool::business_cluster_search: {
      std::vector<Business> items;
      for (const auto& id : notebook.business_ids) {
        const Business* b = pool.find_id(id);
        if (b && (b->category == Category::hotel || b->category == Category::attraction)) {
          items.push_back(*b);
        }
      }
      if (items.empty()) {
        return "Error: no hotels or attractions collected yet; search before clustering.";
      }
      const auto clusters = kmeans_clusters(items, ctx.kmeans_seed);
      const std::string observation = cluster_summary_text(clusters, items);
      notebook.observations.push_back(observation);
      return observation;
    }
    case Tool::planner: {
      if (notebook.empty()) return "Error: Notebook is empty; collect information first.";
      if (!ctx.planner) return "Error: planner backend unavailable.";
      std::string prompt = prompts::plan_template(true);
      prompt = prompts::fill(std::move(prompt), "given_information", notebook.text());
      prompt = prompts::fill(std::move(prompt), "query", call.planner_query);
      return ctx.planner(prompt);
    }
  }
  return "Error: unhandled tool.";
}

// ---- episodes ---------------------------------------------------------------

enum class EpisodeOutcome { delivered, order_dead_loop, argument_dead_loop, step_limit, failed_transport };

inline const char* to_string(EpisodeOutcome o) {
  switch (o) {
    case EpisodeOutcome::delivered: return "delivered";
    case EpisodeOutcome::order_dead_loop: return "order_dead_loop";
    case EpisodeOutcome::argument_dead_loop: return "argument_dead_loop";
    case EpisodeOutcome::step_limit: return "step_limit";
    case EpisodeOutcome::failed_transport: return "failed_transport";
  }
  return "?";
}

struct EpisodeStep {
  std::string model_text;
  std::optional<ToolCall> action;  // absent when the turn failed to parse
  std::string parse_error;
  std::string observation;
};

struct Episode {
  PreferenceQuery query;
  std::vector<EpisodeStep> steps;
  Notebook notebook;
  EpisodeOutcome outcome = EpisodeOutcome::step_limit;
  std::string plan_text;            // Planner output when delivered
  nlohmann::json plan_document;     // extracted schema document when available
  std::string extraction_error;
  std::vector<std::string> client_turns;  // every model reply in call order; replay feed for the mock
};

enum class DeadLoopKind { order, argument };

// Argument loop: the same canonical call `repeats` times in a row. Order
// loop: a cycle of 2..max_cycle distinct calls repeated `repeats` full
// periods at the end of the transcript. Argument loops win when both match.
inline std::optional<DeadLoopKind> detect_dead_loop(const std::vector<std::string>& canonical_actions,
                                                    int repeats = 3, int max_cycle = 4) {
  const std::size_t n = canonical_actions.size();
  if (repeats < 2) return std::nullopt;
  const std::size_t r = static_cast<std::size_t>(repeats);
  if (n >= r) {
    bool same = true;
    for (std::size_t i = n - r + 1; i < n && same; ++i) {
      same = canonical_actions[i] == canonical_actions[n - r];
    }
    if (same) return DeadLoopKind::argument;
  }
  for (std::size_t cycle = 2; cycle <= static_cast<std::size_t>(max_cycle); ++cycle) {
    const std::size_t window = cycle * r;
    if (n < window) break;
    bool repeating = true;
    for (std::size_t i = n - window; i + cycle < n && repeating; ++i) {
      repeating = canonical_actions[i] == canonical_actions[i + cycle];
    }
    if (!repeating) continue;
    bool distinct = true;
    for (std::size_t a = n - cycle; a < n && distinct; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (canonical_actions[a] == canonical_actions[b]) {
          distinct = false;
          break;
        }
      }
    }
    if (distinct) return DeadLoopKind::order;
  }
  return std::nullopt;
}

namespace detail {

// Parse the extraction model's reply, tolerating code fences around the array.
inline nlohmann::json extract_json_array(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
  }
  const std::size_t begin = text.find('[');
  const std::size_t end = text.rfind(']');
  if (begin == std::string::npos || end == std::string::npos || end <= begin) {
    throw ParseError("extraction reply contains no JSON array");
  }
  return nlohmann::json::parse(text.substr(begin, end - begin + 1));
}

}  // namespace detail

// Drive one ReAct episode: model turn, action parse, tool observation,
// repeated until a Planner delivery, a detected dead loop, or the step limit.
inline Episode run_react_episode(const PreferenceQuery& q, const BusinessPool& pool,
                                 ChatClient& client, const AgentConfig& cfg = {}) {
  Episode episode;
  episode.query = q;

  ToolContext ctx;
  ctx.thresholds = cfg.thresholds;
  ctx.kmeans_seed = cfg.kmeans_seed;
  auto ask_model = [&](const std::string& prompt) {
    ChatRequest request{cfg.model, cfg.temperature, {{"user", prompt}}};
    std::string reply;
    try {
      reply = client.complete(request).content;
    } catch (const TransportError&) {
      reply = client.complete(request).content;  // single retry
    }
    episode.client_turns.push_back(reply);
    return reply;
  };
  ctx.planner = ask_model;

  const std::string base_prompt =
      prompts::fill(prompts::kReactTemplate, "query", render_query_text(q));
  std::string scratchpad;
  std::vector<std::string> canonical_actions;

  for (int step = 0; step < cfg.max_steps; ++step) {
    const std::string prompt = prompts::fill(base_prompt, "scratchpad", scratchpad);
    if (prompt.size() > cfg.context_limit_bytes) {
      throw ContextOverflowError("episode prompt of " + std::to_string(prompt.size()) +
                                 " bytes exceeds the context limit");
    }
    EpisodeStep record;
    try {
      record.model_text = ask_model(prompt);
    } catch (const TransportError&) {
      episode.outcome = EpisodeOutcome::failed_transport;
      episode.steps.push_back(std::move(record));
      return episode;
    }

    try {
      record.action = parse_action(record.model_text);
    } catch (const ParseError& e) {
      record.parse_error = e.what();
      record.observation = std::string("Error: ") + e.what();
    }

    if (record.action) {
      record.observation = dispatch_tool(*record.action, pool, episode.notebook, ctx);
      const bool is_error = record.observation.rfind("Error:", 0) == 0;
      if (record.action->tool == Tool::planner && !is_error) {
        episode.plan_text = record.observation;
        episode.outcome = EpisodeOutcome::delivered;
        try {
          const std::string extraction_prompt =
              prompts::fill(prompts::kExtractionTemplate, "plan", episode.plan_text);
          episode.plan_document = detail::extract_json_array(ask_model(extraction_prompt));
        } catch (const std::exception& e) {
          episode.extraction_error = e.what();
        }
        episode.steps.push_back(std::move(record));
        return episode;
      }
      canonical_actions.push_back(record.action->canonical());
    }

    scratchpad += "\n" + record.model_text + "\nObservation: " + record.observation + "\n";
    episode.steps.push_back(std::move(record));

    const auto loop = detect_dead_loop(canonical_actions, cfg.dead_loop_repeats, cfg.max_cycle_length);
    if (loop) {
      episode.outcome = *loop == DeadLoopKind::argument ? EpisodeOutcome::argument_dead_loop
                                                        : EpisodeOutcome::order_dead_loop;
      return episode;
    }
  }
  episode.outcome = EpisodeOutcome::step_limit;
  return episode;
}

// Single-turn task runner for the non-tool tasks: prompt, plan, extraction.
struct PlanTaskResult {
  std::string prompt;
  std::string plan_text;
  std::string extraction_text;
  nlohmann::json plan_document;
};

inline PlanTaskResult run_plan_task(const TaskSpec& spec, const PreferenceQuery& q,
                                    const BusinessPool& pool, ChatClient& client,
                                    const AgentConfig& cfg = {}) {
  if (spec.tool_use) throw InvalidInputError("run_plan_task: task 4 uses run_react_episode");
  PlanTaskResult result;
  result.prompt = build_task_prompt(spec, q, pool, cfg);
  auto ask_model = [&](const std::string& prompt) {
    ChatRequest request{cfg.model, cfg.temperature, {{"user", prompt}}};
    try {
      return client.complete(request).content;
    } catch (const TransportError&) {
      return client.complete(request).content;
    }
  };
  result.plan_text = ask_model(result.prompt);
  result.extraction_text = ask_model(prompts::fill(prompts::kExtractionTemplate, "plan", result.plan_text));
  result.plan_document = detail::extract_json_array(result.extraction_text);
  return result;
}

// ---- tool-use metrics -------------------------------------------------------

// Slot-level accuracy of search-call arguments against the query's ground
// truth: the budget slot, the cuisine slot, and each preference list element
// count one slot each; extraneous or missing expected values are misses.
inline double parameter_accuracy(const std::vector<Episode>& episodes) {
  long long slots = 0;
  long long hits = 0;
  for (const auto& episode : episodes) {
    const auto& q = episode.query;
    for (const auto& step : episode.steps) {
      if (!step.action) continue;
      const auto& call = *step.action;
      if (call.tool == Tool::planner || call.tool == Tool::business_cluster_search) continue;

      slots += 1;  // budget slot
      if (call.budget && *call.budget == q.budget) hits += 1;

      std::vector<std::string> expected;
      switch (call.tool) {
        case Tool::accommodation_search: expected = q.hotel_prefs; break;
        case Tool::restaurant_search: expected = q.restaurant_prefs; break;
        case Tool::attraction_search: expected = {q.orientation}; break;
        default: break;
      }
      if (call.tool == Tool::restaurant_search) {
        slots += 1;  // cuisine slot
        if (call.cuisine && iequals(*call.cuisine, q.cuisine)) hits += 1;
      }
      std::vector<std::string> provided = call.preferences;
      std::sort(provided.begin(), provided.end());
      provided.erase(std::unique(provided.begin(), provided.end()), provided.end());
      for (const auto& want : expected) {
        slots += 1;
        if (std::find(provided.begin(), provided.end(), want) != provided.end()) hits += 1;
      }
      for (const auto& got : provided) {
        if (std::find(expected.begin(), expected.end(), got) == expected.end()) slots += 1;
      }
    }
  }
  if (slots == 0) throw UndefinedMetricError("parameter accuracy: no search calls");
  return 100.0 * static_cast<double>(hits) / static_cast<double>(slots);
}

inline double delivery_rate(const std::vector<Episode>& episodes) {
  if (episodes.empty()) throw UndefinedMetricError("delivery rate: no episodes");
  int delivered = 0;
  for (const auto& e : episodes) delivered += e.outcome == EpisodeOutcome::delivered ? 1 : 0;
  return 100.0 * delivered / static_cast<double>(episodes.size());
}

// Table-style tool-use summary. Dead-loop shares are reported against both
// denominators (all episodes, and dead-looping episodes only).
struct ToolUseStats {
  std::size_t episodes = 0;
  std::optional<double> delivery_pct;
  std::optional<double> parameter_accuracy_pct;
  std::size_t order_dead_loops = 0;
  std::size_t argument_dead_loops = 0;
  std::optional<double> order_dl_of_episodes, argument_dl_of_episodes;
  std::optional<double> order_dl_of_dead_loops, argument_dl_of_dead_loops;
};

inline ToolUseStats tool_use_stats(const std::vector<Episode>& episodes) {
  ToolUseStats stats;
  stats.episodes = episodes.size();
  if (episodes.empty()) return stats;
  stats.delivery_pct = delivery_rate(episodes);
  try {
    stats.parameter_accuracy_pct = parameter_accuracy(episodes);
  } catch (const UndefinedMetricError&) {
  }
  for (const auto& e : episodes) {
    stats.order_dead_loops += e.outcome == EpisodeOutcome::order_dead_loop ? 1 : 0;
    stats.argument_dead_loops += e.outcome == EpisodeOutcome::argument_dead_loop ? 1 : 0;
  }
  const double n = static_cast<double>(episodes.size());
  stats.order_dl_of_episodes = 100.0 * stats.order_dead_loops / n;
  stats.argument_dl_of_episodes = 100.0 * stats.argument_dead_loops / n;
  const std::size_t loops = stats.order_dead_loops + stats.argument_dead_loops;
  if (loops > 0) {
    stats.order_dl_of_dead_loops = 100.0 * stats.order_dead_loops / static_cast<double>(loops);
    stats.argument_dl_of_dead_loops = 100.0 * stats.argument_dead_loops / static_cast<double>(loops);
  }
  return stats;
}

// ---- transcripts ------------------------------------------------------------

inline void to_json(nlohmann::json& j, const EpisodeStep& s) {
  j = nlohmann::json{{"model_text", s.model_text},
                     {"action", s.action ? s.action->canonical() : ""},
                     {"parse_error", s.parse_error},
                     {"observation", s.observation}};
}

inline void to_json(nlohmann::json& j, const Episode& e) {
  j = nlohmann::json{{"query", e.query},
                     {"outcome", to_string(e.outcome)},
                     {"steps", e.steps},
                     {"model_turns", e.client_turns},
                     {"notebook_ids", e.notebook.business_ids},
                     {"plan_text", e.plan_text},
                     {"plan_document", e.plan_document},
                     {"extraction_error", e.extraction_error}};
}

}  // namespace tripbench
