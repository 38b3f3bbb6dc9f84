#include "ecoprobe/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace ecoprobe {

namespace {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

std::int64_t to_ticks(double value, std::int64_t per_unit, const char* what) {
  if (!std::isfinite(value) || value < 0.0) {
    invalid(fmt::format("{} must be finite and non-negative, got {}", what, value));
  }
  const double scaled = value * static_cast<double>(per_unit);
  if (scaled > static_cast<double>(std::numeric_limits<std::int64_t>::max() / 2)) {
    invalid(fmt::format("{} out of range: {}", what, value));
  }
  return std::llround(scaled);
}

}  // namespace

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

GeoPoint GeoPoint::make(double lat, double lon) {
  GeoPoint p{lat, lon};
  if (!is_valid(p)) invalid(fmt::format("invalid coordinate ({}, {})", lat, lon));
  return p;
}

double haversine_meters(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = deg2rad(a.lat);
  const double lat2 = deg2rad(b.lat);
  const double u = std::sin((lat2 - lat1) / 2.0);
  const double v = std::sin(deg2rad(b.lon - a.lon) / 2.0);
  const double h = std::min(1.0, u * u + std::cos(lat1) * std::cos(lat2) * v * v);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double haversine_miles(const GeoPoint& a, const GeoPoint& b) {
  return haversine_meters(a, b) / kMetersPerMile;
}

GeoPoint destination_point(const GeoPoint& from, double heading_deg, double distance_m) {
  const double delta = distance_m / kEarthRadiusM;
  const double theta = deg2rad(heading_deg);
  const double lat1 = deg2rad(from.lat);
  const double lon1 = deg2rad(from.lon);
  const double sin_lat2 =
      std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(theta);
  const double lat2 = std::asin(std::clamp(sin_lat2, -1.0, 1.0));
  const double lon2 =
      lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                        std::cos(delta) - std::sin(lat1) * sin_lat2);
  double lon = rad2deg(lon2);
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  return GeoPoint{rad2deg(lat2), lon};
}

std::string_view to_string(Activity a) {
  switch (a) {
    case Activity::automotive: return "automotive";
    case Activity::walking: return "walking";
    case Activity::running: return "running";
    case Activity::cycling: return "cycling";
    case Activity::stationary: return "stationary";
    case Activity::unknown: return "unknown";
  }
  return "unknown";
}

std::optional<Activity> parse_activity(std::string_view s) {
  for (auto a : {Activity::automotive, Activity::walking, Activity::running, Activity::cycling,
                 Activity::stationary, Activity::unknown}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

std::string_view to_string(TravelMode m) {
  switch (m) {
    case TravelMode::automotive: return "automotive";
    case TravelMode::walking: return "walking";
    case TravelMode::cycling: return "cycling";
    case TravelMode::other: return "other";
  }
  return "other";
}

std::optional<TravelMode> parse_travel_mode(std::string_view s) {
  for (auto m : {TravelMode::automotive, TravelMode::walking, TravelMode::cycling,
                 TravelMode::other}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

std::string_view to_string(AppTab t) {
  switch (t) {
    case AppTab::trips: return "trips";
    case AppTab::carbon: return "carbon";
    case AppTab::cost: return "cost";
    case AppTab::info: return "info";
    case AppTab::log: return "log";
  }
  return "trips";
}

std::optional<AppTab> parse_app_tab(std::string_view s) {
  for (auto t : {AppTab::trips, AppTab::carbon, AppTab::cost, AppTab::info, AppTab::log}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string_view to_string(DisplayOrder o) {
  return o == DisplayOrder::carbon_first ? "carbon_first" : "cost_first";
}

std::optional<DisplayOrder> parse_display_order(std::string_view s) {
  if (s == "carbon_first") return DisplayOrder::carbon_first;
  if (s == "cost_first") return DisplayOrder::cost_first;
  return std::nullopt;
}

std::array<AppTab, kAppTabCount> tab_sequence(DisplayOrder o) {
  if (o == DisplayOrder::carbon_first) {
    return {AppTab::trips, AppTab::carbon, AppTab::cost, AppTab::info, AppTab::log};
  }
  return {AppTab::trips, AppTab::cost, AppTab::carbon, AppTab::info, AppTab::log};
}

void validate(const Trip& trip) {
  if (trip.end_ts <= trip.start_ts) {
    invalid(fmt::format("trip {}: end_ts {} not after start_ts {}", trip.id, trip.end_ts,
                        trip.start_ts));
  }
  if (!is_valid(trip.origin) || !is_valid(trip.destination)) {
    invalid(fmt::format("trip {}: invalid endpoint", trip.id));
  }
  if (!std::isfinite(trip.distance_miles) || trip.distance_miles < 0.0) {
    invalid(fmt::format("trip {}: invalid distance {}", trip.id, trip.distance_miles));
  }
  constexpr double kChordSlackMiles = 1e-6;
  if (trip.distance_miles < haversine_miles(trip.origin, trip.destination) - kChordSlackMiles) {
    invalid(fmt::format("trip {}: distance shorter than endpoint chord", trip.id));
  }
}

Money Money::from_usd(double usd) { return Money(to_ticks(usd, kTicksPerDollar, "money")); }

std::string Money::to_cents_string() const {
  const std::int64_t cents = (ticks_ + 50) / 100;
  return fmt::format("{}.{:02d}", cents / 100, cents % 100);
}

Emission Emission::from_kg(double kg) { return Emission(to_ticks(kg, kTicksPerKg, "emission")); }

double Emission::kg_rounded3() const {
  const std::int64_t grams = (ticks_ + 500) / 1000;
  return static_cast<double>(grams) / 1000.0;
}

TimeRange TimeRange::all() {
  return TimeRange{std::numeric_limits<UnixMs>::min(), std::numeric_limits<UnixMs>::max()};
}

}  // namespace ecoprobe
