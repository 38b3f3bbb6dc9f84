#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ecoprobe/emission_cost.hpp"
#include "ecoprobe/goal_engine.hpp"
#include "ecoprobe/probe_store.hpp"

namespace ecoprobe {

// Everything the tabs display is derived here from a store snapshot, so the service
// and the CLI report identical numbers.

struct ReportSettings {
  PriceConfig prices;
  std::optional<int> utc_offset_minutes;  // process time zone when unset
  int window_days{kDefaultWindowDays};
};

struct TripView {
  Trip trip;
  std::optional<TripCostSummary> summary;  // automotive trips only
};

// Live trips, newest first, with summaries under the current vehicle.
std::vector<TripView> trip_views(const ProbeState& state, const VehicleCatalog& catalog,
                                 const PriceConfig& prices);

// Summaries of live automotive trips, oldest first.
std::vector<TripCostSummary> live_summaries(const ProbeState& state, const VehicleCatalog& catalog,
                                            const PriceConfig& prices);

// Midnight of the day holding the earliest trip ever journaled (deleted ones included, so
// the window clock never moves); unset for a store without trips.
std::optional<UnixMs> study_start(const ProbeState& state, std::optional<int> utc_offset_minutes);

enum class ReportWindow { all, current };

std::optional<GoalMetric> parse_metric(std::string_view s);  // "cost" | "carbon"
std::string_view metric_name(GoalMetric m);
std::optional<ReportWindow> parse_report_window(std::string_view s);
std::string_view to_string(ReportWindow w);

struct MetricReport {
  GoalMetric metric{GoalMetric::cost};
  ReportWindow window{ReportWindow::all};
  Totals totals;
  GoalStatus goal;
  std::optional<GoalWindow> current_window;
};

MetricReport metric_report(const ProbeState& state, const VehicleCatalog& catalog,
                           const ReportSettings& settings, GoalMetric metric, ReportWindow window,
                           UnixMs now_ts);

namespace json_view {

nlohmann::json totals(const Totals& t);
nlohmann::json goal_totals(const GoalTotals& t);
nlohmann::json goal(const GoalStatus& g);
nlohmann::json summary(const TripCostSummary& s);
// Coordinates are included only with `export_coordinates`.
nlohmann::json trip(const TripView& v, bool export_coordinates);
nlohmann::json report(const MetricReport& r);
nlohmann::json vehicle(const VehicleProfile& v);

}  // namespace json_view

}  // namespace ecoprobe
