#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "ecoprobe/error.hpp"

namespace ecoprobe {

// Units policy:
// - Timestamps are integer Unix milliseconds
// - Distances are miles unless a name says otherwise
// - Money is USD, CO2 is kilograms

using UnixMs = std::int64_t;

constexpr UnixMs kMsPerDay = 86'400'000;
constexpr double kMetersPerMile = 1609.344;
constexpr double kEarthRadiusKm = 6371.0088;
constexpr double kEarthRadiusM = kEarthRadiusKm * 1000.0;

struct GeoPoint {
  double lat{0.0};  // degrees, -90 to 90
  double lon{0.0};  // degrees, -180 to 180

  // Throws Error(invalid_input) on non-finite or out-of-range coordinates.
  static GeoPoint make(double lat, double lon);

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

bool is_valid(const GeoPoint& p);

// Great-circle distance on a sphere of mean Earth radius.
double haversine_miles(const GeoPoint& a, const GeoPoint& b);
double haversine_meters(const GeoPoint& a, const GeoPoint& b);

// Point reached by travelling `distance_m` from `from` along the initial bearing
// `heading_deg` (clockwise from north) on the same sphere.
GeoPoint destination_point(const GeoPoint& from, double heading_deg, double distance_m);

enum class Activity { automotive, walking, running, cycling, stationary, unknown };

std::string_view to_string(Activity a);
std::optional<Activity> parse_activity(std::string_view s);

struct LocationSample {
  GeoPoint point;
  double horizontal_accuracy_m{0.0};
  std::optional<double> speed_mps;  // nullopt when the sensor did not report one

  friend bool operator==(const LocationSample&, const LocationSample&) = default;
};

struct MotionSample {
  Activity activity{Activity::unknown};
  double confidence{0.0};  // [0, 1]

  friend bool operator==(const MotionSample&, const MotionSample&) = default;
};

struct TraceRecord {
  UnixMs ts{0};
  std::variant<LocationSample, MotionSample> payload;

  bool is_location() const { return std::holds_alternative<LocationSample>(payload); }
  bool is_motion() const { return std::holds_alternative<MotionSample>(payload); }
  const LocationSample& location() const { return std::get<LocationSample>(payload); }
  const MotionSample& motion() const { return std::get<MotionSample>(payload); }

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

enum class TravelMode { automotive, walking, cycling, other };

std::string_view to_string(TravelMode m);
std::optional<TravelMode> parse_travel_mode(std::string_view s);

struct Trip {
  std::string id;
  UnixMs start_ts{0};
  UnixMs end_ts{0};
  GeoPoint origin;
  GeoPoint destination;
  double distance_miles{0.0};
  TravelMode mode{TravelMode::automotive};
  bool deleted{false};

  friend bool operator==(const Trip&, const Trip&) = default;
};

// Checks the Trip invariants (ordering of timestamps, valid endpoints, path length
// dominating the endpoint chord).
void validate(const Trip& trip);

// Fixed-point USD with four decimals. Aggregation over integer ticks is exact.
class Money {
 public:
  static constexpr std::int64_t kTicksPerDollar = 10'000;

  constexpr Money() = default;
  static Money from_usd(double usd);
  static constexpr Money from_ticks(std::int64_t ticks) { return Money(ticks); }

  constexpr std::int64_t ticks() const { return ticks_; }
  constexpr double usd() const { return static_cast<double>(ticks_) / kTicksPerDollar; }
  // Half-up rounding to cents, e.g. "1.28".
  std::string to_cents_string() const;

  Money& operator+=(Money o) { ticks_ += o.ticks_; return *this; }
  friend Money operator+(Money a, Money b) { return a += b; }
  friend auto operator<=>(const Money&, const Money&) = default;

 private:
  constexpr explicit Money(std::int64_t ticks) : ticks_(ticks) {}
  std::int64_t ticks_{0};
};

// Fixed-point CO2 mass with milligram resolution.
class Emission {
 public:
  static constexpr std::int64_t kTicksPerKg = 1'000'000;

  constexpr Emission() = default;
  static Emission from_kg(double kg);
  static constexpr Emission from_ticks(std::int64_t ticks) { return Emission(ticks); }

  constexpr std::int64_t ticks() const { return ticks_; }
  constexpr double kg() const { return static_cast<double>(ticks_) / kTicksPerKg; }
  // Kilograms rounded half-up to three decimals.
  double kg_rounded3() const;

  Emission& operator+=(Emission o) { ticks_ += o.ticks_; return *this; }
  friend Emission operator+(Emission a, Emission b) { return a += b; }
  friend auto operator<=>(const Emission&, const Emission&) = default;

 private:
  constexpr explicit Emission(std::int64_t ticks) : ticks_(ticks) {}
  std::int64_t ticks_{0};
};

// The five app tabs. Trips is always first and the default focus; carbon and cost
// occupy positions two and three in a per-participant random order.
enum class AppTab { trips, carbon, cost, info, log };
inline constexpr std::size_t kAppTabCount = 5;

std::string_view to_string(AppTab t);
std::optional<AppTab> parse_app_tab(std::string_view s);

enum class DisplayOrder { carbon_first, cost_first };

std::string_view to_string(DisplayOrder o);
std::optional<DisplayOrder> parse_display_order(std::string_view s);
// Tab sequence as displayed, trips first.
std::array<AppTab, kAppTabCount> tab_sequence(DisplayOrder o);

// Half-open [from, to) interval of Unix milliseconds.
struct TimeRange {
  UnixMs from{0};
  UnixMs to{0};

  static TimeRange all();
  bool contains(UnixMs ts) const { return ts >= from && ts < to; }
};

}  // namespace ecoprobe
