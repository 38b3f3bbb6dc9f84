#include "ecoprobe/probe_report.hpp"

#include <algorithm>
#include <cmath>

namespace ecoprobe {

using nlohmann::json;

std::vector<TripView> trip_views(const ProbeState& state, const VehicleCatalog& catalog,
                                 const PriceConfig& prices) {
  const auto choice = state.vehicle_or_default();
  const VehicleProfile& vehicle = catalog.at(choice.category, choice.powertrain);
  std::vector<TripView> out;
  for (const auto& t : state.trips) {
    if (t.deleted) continue;
    TripView v{t, std::nullopt};
    if (t.mode == TravelMode::automotive) v.summary = trip_summary(t, vehicle, prices);
    out.push_back(std::move(v));
  }
  std::stable_sort(out.begin(), out.end(), [](const TripView& a, const TripView& b) {
    return a.trip.start_ts > b.trip.start_ts;
  });
  return out;
}

std::vector<TripCostSummary> live_summaries(const ProbeState& state, const VehicleCatalog& catalog,
                                            const PriceConfig& prices) {
  const auto choice = state.vehicle_or_default();
  const VehicleProfile& vehicle = catalog.at(choice.category, choice.powertrain);
  std::vector<TripCostSummary> out;
  for (const auto& t : state.trips) {
    if (!t.deleted && t.mode == TravelMode::automotive) out.push_back(trip_summary(t, vehicle, prices));
  }
  std::stable_sort(out.begin(), out.end(), [](const TripCostSummary& a, const TripCostSummary& b) {
    return a.start_ts < b.start_ts;
  });
  return out;
}

std::optional<UnixMs> study_start(const ProbeState& state, std::optional<int> utc_offset_minutes) {
  if (state.trips.empty()) return std::nullopt;
  UnixMs earliest = state.trips.front().start_ts;
  for (const auto& t : state.trips) earliest = std::min(earliest, t.start_ts);
  return local_midnight(earliest, utc_offset_minutes);
}

std::optional<GoalMetric> parse_metric(std::string_view s) {
  if (s == "cost") return GoalMetric::cost;
  if (s == "carbon") return GoalMetric::co2;
  return std::nullopt;
}

std::string_view metric_name(GoalMetric m) { return m == GoalMetric::cost ? "cost" : "carbon"; }

std::optional<ReportWindow> parse_report_window(std::string_view s) {
  if (s == "all") return ReportWindow::all;
  if (s == "current") return ReportWindow::current;
  return std::nullopt;
}

std::string_view to_string(ReportWindow w) { return w == ReportWindow::all ? "all" : "current"; }

MetricReport metric_report(const ProbeState& state, const VehicleCatalog& catalog,
                           const ReportSettings& settings, GoalMetric metric, ReportWindow window,
                           UnixMs now_ts) {
  MetricReport r;
  r.metric = metric;
  r.window = window;
  const auto summaries = live_summaries(state, catalog, settings.prices);
  const auto start = study_start(state, settings.utc_offset_minutes);

  if (!start || now_ts < *start) {
    // No window clock yet: everything so far is the first period.
    r.totals = window == ReportWindow::all || !start ? aggregate(summaries) : Totals{};
    r.goal.kind = GoalKind::no_goal_yet;
    if (start && window == ReportWindow::all) {
      r.goal.current = {r.totals.cost, r.totals.co2};
    }
    return r;
  }

  const auto windows = assign_windows(summaries, *start, now_ts, settings.window_days);
  r.goal = goal_status(windows, metric, now_ts);
  const UnixMs len = static_cast<UnixMs>(settings.window_days) * kMsPerDay;
  const auto k = static_cast<std::size_t>((now_ts - *start) / len);
  r.current_window = windows.at(k);
  r.totals = window == ReportWindow::all
                 ? aggregate(summaries)
                 : aggregate(summaries, TimeRange{r.current_window->start_ts, r.current_window->end_ts});
  return r;
}

namespace json_view {

namespace {

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

}  // namespace

json totals(const Totals& t) {
  return json{{"cost_usd", t.cost.to_cents_string()},
              {"co2_kg", t.co2.kg_rounded3()},
              {"potential_cost_saving_usd", t.potential_cost_saving.to_cents_string()},
              {"potential_co2_saving_kg", t.potential_co2_saving.kg_rounded3()},
              {"trip_count", t.trip_count}};
}

json goal_totals(const GoalTotals& t) {
  return json{{"cost_usd", t.cost.to_cents_string()}, {"co2_kg", t.co2.kg_rounded3()}};
}

json goal(const GoalStatus& g) {
  return json{{"kind", to_string(g.kind)},
              {"goal", g.goal ? goal_totals(*g.goal) : json(nullptr)},
              {"current", goal_totals(g.current)},
              {"message", g.message ? json(*g.message) : json(nullptr)}};
}

json summary(const TripCostSummary& s) {
  return json{{"gallons", round_to(s.gallons, 1e4)},
              {"cost_usd", s.cost.to_cents_string()},
              {"co2_kg", s.co2.kg_rounded3()},
              {"eco_fraction", round_to(s.eco_fraction, 1e4)},
              {"potential_cost_saving_usd", s.potential_cost_saving.to_cents_string()},
              {"potential_co2_saving_kg", s.potential_co2_saving.kg_rounded3()}};
}

json trip(const TripView& v, bool export_coordinates) {
  json j{{"id", v.trip.id},
         {"start_ts", v.trip.start_ts},
         {"end_ts", v.trip.end_ts},
         {"distance_miles", round_to(v.trip.distance_miles, 1e3)},
         {"mode", to_string(v.trip.mode)},
         {"summary", v.summary ? summary(*v.summary) : json(nullptr)}};
  if (export_coordinates) {
    j["origin"] = {{"lat", v.trip.origin.lat}, {"lon", v.trip.origin.lon}};
    j["destination"] = {{"lat", v.trip.destination.lat}, {"lon", v.trip.destination.lon}};
  }
  return j;
}

json report(const MetricReport& r) {
  json j{{"metric", metric_name(r.metric)},
         {"window", to_string(r.window)},
         {"totals", totals(r.totals)},
         {"goal", goal(r.goal)}};
  if (r.current_window) {
    j["current_window"] = {{"index", r.current_window->index},
                           {"start_ts", r.current_window->start_ts},
                           {"end_ts", r.current_window->end_ts}};
  } else {
    j["current_window"] = nullptr;
  }
  return j;
}

json vehicle(const VehicleProfile& v) {
  return json{{"category", to_string(v.category)},
              {"powertrain", to_string(v.powertrain)},
              {"mpg", v.mpg_combined},
              {"co2_g_per_mile", v.co2_g_per_mile ? json(*v.co2_g_per_mile) : json(nullptr)}};
}

}  // namespace json_view

}  // namespace ecoprobe
