#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tripbench/clustering.hpp"
#include "tripbench/dataset.hpp"
#include "tripbench/plan_model.hpp"
#include "tripbench/querygen.hpp"
#include "tripbench/solvers.hpp"

namespace tripbench {

struct MetricConfig {
  double macro_threshold = 0.75;  // per-plan satisfaction rate needed to pass
  int daily_quota = 4;            // requested attractions per day
  FilterConfig thresholds;
  int node_cap = kDefaultNodeCap;
  std::uint64_t kmeans_seed = 0;
};

// One plan ready for scoring: flags populated by check_failures, paired with
// its query and the pool its generator saw.
struct EvaluatedPlan {
  Itinerary plan;
  PreferenceQuery query;
  std::shared_ptr<const BusinessPool> pool;
};

struct EvaluationBatch {
  std::vector<EvaluatedPlan> plans;
  MetricConfig config;
};

// Entry-level preference check. Returns nullopt when the entry failed the
// failure checks (flagged entries are skipped, not scored).
inline std::optional<bool> preference_satisfied(const SlotEntry& entry, const Preference& pref,
                                                const BusinessPool& pool,
                                                const FilterConfig& cfg = {}) {
  if (entry.missing || entry.out_of_pool || !entry.resolved) return std::nullopt;
  const Business* b = pool.find_id(*entry.resolved);
  if (!b) return std::nullopt;
  return satisfies(*b, pref, cfg);
}

namespace detail {

struct EntryTally {
  int evaluable = 0;
  int satisfied = 0;
};

// Pool every (preference, related entry) pair of one plan.
inline EntryTally tally_plan(const EvaluatedPlan& item, const FilterConfig& cfg) {
  EntryTally tally;
  const auto prefs = preferences_of(item.query);
  for (const auto& d : item.plan.days) {
    std::vector<std::pair<const SlotEntry*, Category>> entries;
    entries.push_back({&d.accommodation, Category::hotel});
    for (const auto* m : d.meal_sequence()) entries.push_back({m, Category::restaurant});
    for (const auto* a : d.attraction_sequence()) entries.push_back({a, Category::attraction});
    for (const auto& [entry, category] : entries) {
      for (const auto& pref : applicable_preferences(prefs, category)) {
        const auto verdict = preference_satisfied(*entry, pref, *item.pool, cfg);
        if (!verdict) continue;
        tally.evaluable += 1;
        tally.satisfied += *verdict ? 1 : 0;
      }
    }
  }
  return tally;
}

inline void require_plans(const EvaluationBatch& batch) {
  if (batch.plans.empty()) throw EmptyBatchError("metrics: empty batch");
}

}  // namespace detail

// Share of plans with at least one out-of-pool entry / at least one missing
// entry, as percentages.
inline std::pair<double, double> failure_rates(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  int oop = 0;
  int mi = 0;
  for (const auto& item : batch.plans) {
    oop += item.plan.any_flag(&SlotEntry::out_of_pool) ? 1 : 0;
    mi += item.plan.any_flag(&SlotEntry::missing) ? 1 : 0;
  }
  const double n = static_cast<double>(batch.plans.size());
  return {100.0 * oop / n, 100.0 * mi / n};
}

// Entry-level satisfaction rate pooled over the whole batch; flagged entries
// are excluded from numerator and denominator.
inline double micro_rate(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  int evaluable = 0;
  int satisfied = 0;
  for (const auto& item : batch.plans) {
    const auto tally = detail::tally_plan(item, batch.config.thresholds);
    evaluable += tally.evaluable;
    satisfied += tally.satisfied;
  }
  if (evaluable == 0) throw UndefinedMetricError("micro: no evaluable entries");
  return 100.0 * satisfied / evaluable;
}

// Share of plans whose own satisfaction rate reaches the threshold
// (inclusive). A plan with no evaluable entries cannot pass.
inline double macro_rate(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  int passing = 0;
  int any_evaluable = 0;
  for (const auto& item : batch.plans) {
    const auto tally = detail::tally_plan(item, batch.config.thresholds);
    if (tally.evaluable == 0) continue;
    any_evaluable = 1;
    const double micro = static_cast<double>(tally.satisfied) / tally.evaluable;
    if (micro >= batch.config.macro_threshold) ++passing;
  }
  if (!any_evaluable) throw UndefinedMetricError("macro: no evaluable entries");
  return 100.0 * passing / static_cast<double>(batch.plans.size());
}

// Share of plans that pass both failure checks and the macro threshold.
inline double validated_rate(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  int validated = 0;
  int any_evaluable = 0;
  for (const auto& item : batch.plans) {
    const auto tally = detail::tally_plan(item, batch.config.thresholds);
    if (tally.evaluable > 0) any_evaluable = 1;
    if (item.plan.any_flag(&SlotEntry::out_of_pool) || item.plan.any_flag(&SlotEntry::missing)) continue;
    if (tally.evaluable == 0) continue;
    const double micro = static_cast<double>(tally.satisfied) / tally.evaluable;
    if (micro >= batch.config.macro_threshold) ++validated;
  }
  if (!any_evaluable) throw UndefinedMetricError("validated rate: no evaluable entries");
  return 100.0 * validated / static_cast<double>(batch.plans.size());
}

struct ArgResult {
  double signed_mean = 0.0;      // mean of (daily count - quota) over all days
  double normalized_pct = 0.0;   // |mean per day - quota| / quota * 100
  double mean_per_day = 0.0;
};

// Deviation of daily attraction counts from the requested quota. Missing
// entries are not recommendations and do not count.
inline ArgResult arg(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  long long total_attractions = 0;
  long long total_days = 0;
  for (const auto& item : batch.plans) {
    for (const auto& d : item.plan.days) {
      ++total_days;
      for (const auto* e : d.attraction_sequence()) {
        if (!e->missing) ++total_attractions;
      }
    }
  }
  if (total_days == 0) throw UndefinedMetricError("arg: no days");
  ArgResult r;
  r.mean_per_day = static_cast<double>(total_attractions) / static_cast<double>(total_days);
  r.signed_mean = r.mean_per_day - static_cast<double>(batch.config.daily_quota);
  r.normalized_pct = std::abs(r.mean_per_day - batch.config.daily_quota) /
                     static_cast<double>(batch.config.daily_quota) * 100.0;
  return r;
}

namespace detail {

struct DaySpatial {
  GeoPoint hotel;
  std::string hotel_id;
  std::vector<GeoPoint> points;           // attraction coordinates in stated order
  std::vector<std::string> business_ids;  // aligned with points
};

// A day is spatially evaluable when its hotel and every attraction entry
// resolved. Days with no attractions contribute no route legs and are
// dropped; days beyond the single-day permutation limit are not day-wise
// evaluable.
inline std::optional<DaySpatial> day_spatial(const DayPlan& d, const BusinessPool& pool) {
  if (!d.accommodation.resolved) return std::nullopt;
  const Business* hotel = pool.find_id(*d.accommodation.resolved);
  if (!hotel) return std::nullopt;
  DaySpatial out;
  out.hotel = hotel->location;
  out.hotel_id = hotel->id;
  for (const auto* e : d.attraction_sequence()) {
    if (e->missing) continue;
    if (!e->resolved) return std::nullopt;
    const Business* b = pool.find_id(*e->resolved);
    if (!b) return std::nullopt;
    out.points.push_back(b->location);
    out.business_ids.push_back(b->id);
  }
  return out;
}

inline std::vector<std::vector<int>> identity_orders(const std::vector<int>& quotas) {
  std::vector<std::vector<int>> orders;
  int next = 0;
  for (int q : quotas) {
    std::vector<int> o(static_cast<std::size_t>(q));
    std::iota(o.begin(), o.end(), next);
    next += q;
    orders.push_back(std::move(o));
  }
  return orders;
}

inline int count_runs(const std::vector<int>& labels) {
  int runs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i == 0 || labels[i] != labels[i - 1]) ++runs;
  }
  return runs;
}

}  // namespace detail

struct DistanceGapResult {
  double pct = 0.0;
  double plan_km_sum = 0.0;      // sum of stated-route distances
  double optimal_km_sum = 0.0;   // sum of optimal distances
  std::size_t included_days = 0;
  std::size_t excluded_days = 0;
};

// Day-wise excess distance of the stated visiting order over the optimal
// order, as a ratio of summed optima.
inline DistanceGapResult day_distance_gap(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  DistanceGapResult r;
  for (const auto& item : batch.plans) {
    for (const auto& d : item.plan.days) {
      const auto spatial = detail::day_spatial(d, *item.pool);
      if (!spatial || spatial->points.empty() || spatial->points.size() > 8) {
        ++r.excluded_days;
        continue;
      }
      const auto inst = RouteInstance::build({spatial->hotel}, spatial->points,
                                             {static_cast<int>(spatial->points.size())});
      const double stated = route_distance(inst, detail::identity_orders(inst.per_day_quota));
      const double optimal = optimize_day_route(spatial->hotel, spatial->points).total_km;
      r.plan_km_sum += stated;
      r.optimal_km_sum += optimal;
      ++r.included_days;
    }
  }
  if (r.included_days == 0) throw UndefinedMetricError("day distance gap: no evaluable days");
  r.pct = r.optimal_km_sum == 0.0
              ? 0.0
              : (r.plan_km_sum - r.optimal_km_sum) / r.optimal_km_sum * 100.0;
  return r;
}

struct PlanSpatialScore {
  std::string query_ref;
  bool included = false;
  std::string exclusion;  // "flagged-entry", "over-cap", "no-attractions"
  double plan_km = 0.0;
  double optimal_km = 0.0;
  int stated_runs = 0;
  int optimal_runs = 0;
};

struct TotalGapResult {
  double pct = 0.0;
  double plan_km_sum = 0.0;
  double optimal_km_sum = 0.0;
  std::size_t included_plans = 0;
  std::size_t excluded_plans = 0;
  std::size_t over_cap_plans = 0;
  std::vector<PlanSpatialScore> per_plan;
};

struct EcjResult {
  double pct = 0.0;
  long long stated_runs_sum = 0;
  long long optimal_runs_sum = 0;
  std::size_t included_plans = 0;
};

namespace detail {

// Plan-wise spatial scoring shared by Total-DG and ECJ: both need the
// multi-day optimum over the plan's own POIs and per-day quotas.
inline TotalGapResult plan_spatial_scores(const EvaluationBatch& batch, bool with_clusters,
                                          EcjResult* ecj) {
  require_plans(batch);
  TotalGapResult r;
  for (const auto& item : batch.plans) {
    PlanSpatialScore score;
    score.query_ref = item.plan.query_ref;

    std::vector<GeoPoint> hotels;
    std::vector<int> quotas;
    std::vector<GeoPoint> points;
    std::vector<std::string> hotel_ids;
    std::vector<std::string> attraction_ids;
    bool flagged = false;
    for (const auto& d : item.plan.days) {
      const auto spatial = day_spatial(d, *item.pool);
      if (!spatial) {
        flagged = true;
        break;
      }
      if (spatial->points.empty()) continue;  // no legs that day
      hotels.push_back(spatial->hotel);
      hotel_ids.push_back(spatial->hotel_id);
      quotas.push_back(static_cast<int>(spatial->points.size()));
      points.insert(points.end(), spatial->points.begin(), spatial->points.end());
      attraction_ids.insert(attraction_ids.end(), spatial->business_ids.begin(),
                            spatial->business_ids.end());
    }

    if (flagged) {
      score.exclusion = "flagged-entry";
    } else if (points.empty()) {
      score.exclusion = "no-attractions";
    } else if (static_cast<int>(points.size()) > batch.config.node_cap) {
      score.exclusion = "over-cap";
      ++r.over_cap_plans;
    }
    if (!score.exclusion.empty()) {
      ++r.excluded_plans;
      r.per_plan.push_back(std::move(score));
      continue;
    }

    const auto inst = RouteInstance::build(hotels, points, quotas, batch.config.node_cap);
    const auto optimal = heldkarp_multiday(inst);
    score.plan_km = route_distance(inst, identity_orders(quotas));
    score.optimal_km = optimal.total_km;
    score.included = true;
    r.plan_km_sum += score.plan_km;
    r.optimal_km_sum += score.optimal_km;
    ++r.included_plans;

    if (with_clusters && ecj) {
      // cluster the plan's distinct POIs; label both visit sequences
      std::vector<Business> items;
      std::map<std::string, bool> seen;
      auto push_unique = [&](const std::string& id) {
        if (seen.count(id)) return;
        seen[id] = true;
        items.push_back(*item.pool->find_id(id));
      };
      for (const auto& id : hotel_ids) push_unique(id);
      for (const auto& id : attraction_ids) push_unique(id);
      const auto clusters = kmeans_clusters(items, batch.config.kmeans_seed);

      std::vector<int> stated_labels;
      for (const auto& id : attraction_ids) stated_labels.push_back(clusters.labels_by_id.at(id));
      std::vector<int> optimal_labels;
      for (const auto& day : optimal.day_orders) {
        for (int idx : day) {
          optimal_labels.push_back(
              clusters.labels_by_id.at(attraction_ids[static_cast<std::size_t>(idx)]));
        }
      }
      score.stated_runs = count_runs(stated_labels);
      score.optimal_runs = count_runs(optimal_labels);
      ecj->stated_runs_sum += score.stated_runs;
      ecj->optimal_runs_sum += score.optimal_runs;
      ++ecj->included_plans;
    }
    r.per_plan.push_back(std::move(score));
  }
  return r;
}

}  // namespace detail

// Plan-wise excess distance over the multi-day optimum (free reassignment of
// attractions to days under the plan's own per-day counts).
inline TotalGapResult total_distance_gap(const EvaluationBatch& batch) {
  auto r = detail::plan_spatial_scores(batch, false, nullptr);
  if (r.included_plans == 0) throw UndefinedMetricError("total distance gap: no evaluable plans");
  r.pct = r.optimal_km_sum == 0.0
              ? 0.0
              : (r.plan_km_sum - r.optimal_km_sum) / r.optimal_km_sum * 100.0;
  return r;
}

// Excess count of cluster-to-cluster hops: maximal same-cluster runs in the
// stated attraction sequence versus the optimal sequence, under a k-means
// labeling of the plan's own POIs.
inline EcjResult extra_cluster_jump(const EvaluationBatch& batch) {
  EcjResult ecj;
  auto r = detail::plan_spatial_scores(batch, true, &ecj);
  if (ecj.included_plans == 0) throw UndefinedMetricError("extra cluster jump: no evaluable plans");
  if (ecj.optimal_runs_sum == 0) throw UndefinedMetricError("extra cluster jump: zero optimal runs");
  ecj.pct = static_cast<double>(ecj.stated_runs_sum - ecj.optimal_runs_sum) /
            static_cast<double>(ecj.optimal_runs_sum) * 100.0;
  return ecj;
}

// ---- Report assembly ------------------------------------------------------

struct PlanScore {
  std::string query_ref;
  std::string source;
  bool has_out_of_pool = false;
  bool has_missing = false;
  int evaluable_entries = 0;
  int satisfied_entries = 0;
  std::optional<double> micro_pct;
  bool macro_pass = false;
  bool validated = false;
  std::vector<int> day_attraction_counts;
  PlanSpatialScore spatial;
};

struct MetricReport {
  std::string source_label;
  std::size_t plan_count = 0;

  std::optional<double> oop_pct, mi_pct, micro_pct, macro_pct, vr_pct;
  std::optional<double> arg_signed, arg_pct, arg_mean_per_day;
  std::optional<double> dg_pct, total_dg_pct, ecj_pct;

  std::size_t dg_days_included = 0, dg_days_excluded = 0;
  std::size_t tdg_plans_included = 0, tdg_plans_excluded = 0, tdg_plans_over_cap = 0;

  std::vector<PlanScore> plans;
};

// Score every column, rendering undefined metrics as absent rather than
// failing the whole report.
inline MetricReport build_report(const EvaluationBatch& batch) {
  detail::require_plans(batch);
  MetricReport report;
  report.plan_count = batch.plans.size();

  std::string label = to_string(batch.plans.front().plan.source);
  for (const auto& item : batch.plans) {
    if (label != to_string(item.plan.source)) {
      label = "mixed";
      break;
    }
  }
  report.source_label = label;

  {
    const auto [oop, mi] = failure_rates(batch);
    report.oop_pct = oop;
    report.mi_pct = mi;
  }
  try {
    report.micro_pct = micro_rate(batch);
  } catch (const UndefinedMetricError&) {
  }
  try {
    report.macro_pct = macro_rate(batch);
  } catch (const UndefinedMetricError&) {
  }
  try {
    report.vr_pct = validated_rate(batch);
  } catch (const UndefinedMetricError&) {
  }
  try {
    const auto a = arg(batch);
    report.arg_signed = a.signed_mean;
    report.arg_pct = a.normalized_pct;
    report.arg_mean_per_day = a.mean_per_day;
  } catch (const UndefinedMetricError&) {
  }
  try {
    const auto dg = day_distance_gap(batch);
    report.dg_pct = dg.pct;
    report.dg_days_included = dg.included_days;
    report.dg_days_excluded = dg.excluded_days;
  } catch (const UndefinedMetricError&) {
  }

  EcjResult ecj;
  const TotalGapResult tdg = detail::plan_spatial_scores(batch, true, &ecj);
  report.tdg_plans_included = tdg.included_plans;
  report.tdg_plans_excluded = tdg.excluded_plans;
  report.tdg_plans_over_cap = tdg.over_cap_plans;
  if (tdg.included_plans > 0) {
    report.total_dg_pct = tdg.optimal_km_sum == 0.0
                              ? 0.0
                              : (tdg.plan_km_sum - tdg.optimal_km_sum) / tdg.optimal_km_sum * 100.0;
  }
  if (ecj.included_plans > 0 && ecj.optimal_runs_sum > 0) {
    report.ecj_pct = static_cast<double>(ecj.stated_runs_sum - ecj.optimal_runs_sum) /
                     static_cast<double>(ecj.optimal_runs_sum) * 100.0;
  }

  // per-plan records
  for (std::size_t i = 0; i < batch.plans.size(); ++i) {
    const auto& item = batch.plans[i];
    PlanScore score;
    score.query_ref = item.plan.query_ref;
    score.source = to_string(item.plan.source);
    score.has_out_of_pool = item.plan.any_flag(&SlotEntry::out_of_pool);
    score.has_missing = item.plan.any_flag(&SlotEntry::missing);
    const auto tally = detail::tally_plan(item, batch.config.thresholds);
    score.evaluable_entries = tally.evaluable;
    score.satisfied_entries = tally.satisfied;
    if (tally.evaluable > 0) {
      score.micro_pct = 100.0 * tally.satisfied / tally.evaluable;
      score.macro_pass =
          static_cast<double>(tally.satisfied) / tally.evaluable >= batch.config.macro_threshold;
    }
    score.validated = score.macro_pass && !score.has_out_of_pool && !score.has_missing;
    for (const auto& d : item.plan.days) {
      int count = 0;
      for (const auto* e : d.attraction_sequence()) count += e->missing ? 0 : 1;
      score.day_attraction_counts.push_back(count);
    }
    score.spatial = tdg.per_plan[i];
    report.plans.push_back(std::move(score));
  }
  return report;
}

namespace detail {

inline nlohmann::json cell(const std::optional<double>& v) {
  if (!v) return "-";
  return *v;
}

inline std::string csv_cell(const std::optional<double>& v, int precision = 1) {
  if (!v) return "-";
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << *v;
  return out.str();
}

}  // namespace detail

inline void to_json(nlohmann::json& j, const PlanScore& p) {
  j = nlohmann::json{{"query_ref", p.query_ref},
                     {"source", p.source},
                     {"out_of_pool", p.has_out_of_pool},
                     {"missing", p.has_missing},
                     {"evaluable_entries", p.evaluable_entries},
                     {"satisfied_entries", p.satisfied_entries},
                     {"micro", detail::cell(p.micro_pct)},
                     {"macro_pass", p.macro_pass},
                     {"validated", p.validated},
                     {"day_attraction_counts", p.day_attraction_counts},
                     {"spatial",
                      {{"included", p.spatial.included},
                       {"exclusion", p.spatial.exclusion},
                       {"plan_km", p.spatial.plan_km},
                       {"optimal_km", p.spatial.optimal_km},
                       {"stated_runs", p.spatial.stated_runs},
                       {"optimal_runs", p.spatial.optimal_runs}}}};
}

inline void to_json(nlohmann::json& j, const MetricReport& r) {
  j = nlohmann::json{
      {"source", r.source_label},
      {"plan_count", r.plan_count},
      {"columns",
       {{"OOP", detail::cell(r.oop_pct)},
        {"MI", detail::cell(r.mi_pct)},
        {"Micro", detail::cell(r.micro_pct)},
        {"Macro", detail::cell(r.macro_pct)},
        {"VR", detail::cell(r.vr_pct)},
        {"ARG", detail::cell(r.arg_pct)},
        {"ARG mean", detail::cell(r.arg_mean_per_day)},
        {"ARG signed", detail::cell(r.arg_signed)},
        {"DG", detail::cell(r.dg_pct)},
        {"Total-DG", detail::cell(r.total_dg_pct)},
        {"ECJ", detail::cell(r.ecj_pct)}}},
      {"exclusions",
       {{"dg_days_included", r.dg_days_included},
        {"dg_days_excluded", r.dg_days_excluded},
        {"tdg_plans_included", r.tdg_plans_included},
        {"tdg_plans_excluded", r.tdg_plans_excluded},
        {"tdg_plans_over_cap", r.tdg_plans_over_cap}}},
      {"conventions",
       {{"gap_metrics", "ratio of summed kilometers, x100"},
        {"ecj", "maximal same-cluster runs, stated vs optimal visit sequence"},
        {"macro_comparison", "inclusive (micro >= threshold)"}}},
      {"plans", r.plans}};
}

// One header plus one aggregate row in the familiar benchmark column order.
inline std::string report_to_csv(const MetricReport& r) {
  std::ostringstream out;
  out << "Source,Plans,OOP,MI,Micro,Macro,VR,ARG,DG,Total-DG,ECJ\n";
  out << r.source_label << ',' << r.plan_count << ',' << detail::csv_cell(r.oop_pct) << ','
      << detail::csv_cell(r.mi_pct) << ',' << detail::csv_cell(r.micro_pct) << ','
      << detail::csv_cell(r.macro_pct) << ',' << detail::csv_cell(r.vr_pct) << ',';
  if (r.arg_pct && r.arg_mean_per_day) {
    out << detail::csv_cell(r.arg_pct) << " (" << detail::csv_cell(r.arg_mean_per_day, 2) << ")";
  } else {
    out << "-";
  }
  out << ',' << detail::csv_cell(r.dg_pct) << ',' << detail::csv_cell(r.total_dg_pct) << ','
      << detail::csv_cell(r.ecj_pct) << '\n';
  return out.str();
}

}  // namespace tripbench
