#pragma once

#include <span>
#include <vector>

#include "ecoprobe/domain.hpp"
#include "ecoprobe/trace_io.hpp"

namespace ecoprobe {

struct DetectorConfig {
  double min_auto_confidence{0.5};       // [0, 1]
  double start_speed_mps{4.0};
  UnixMs end_dwell_ms{300'000};          // no fast sample for this long ends a trip
  double min_trip_distance_miles{0.25};
  double winding_factor{1.15};           // >= 1
  UnixMs motion_proximity_ms{60'000};    // fast fix must be this close to an automotive sample
  // Route points closer than this multiple of their reported accuracy to the previously
  // kept point are dropped before the distance query. 0 keeps every point.
  double jitter_accuracy_multiple{10.0};

  // Throws Error(invalid_input) when a field is out of range.
  void validate() const;
};

// Route-distance estimate over an ordered path. Implementations must return at least
// the chord distance between the first and last point.
class DistanceProvider {
 public:
  virtual ~DistanceProvider() = default;
  virtual double route_miles(std::span<const GeoPoint> points) const = 0;
};

// Sum of haversine legs times `winding_factor`. Fewer than two points is 0.
double path_distance(std::span<const GeoPoint> points, double winding_factor);

class HaversinePathProvider final : public DistanceProvider {
 public:
  explicit HaversinePathProvider(double winding_factor = 1.15);
  double route_miles(std::span<const GeoPoint> points) const override;

 private:
  double winding_factor_;
};

struct TimedMotion {
  UnixMs ts{0};
  MotionSample sample;
};

// Mode with the largest confidence-weighted duration share. Each sample lasts until
// the next one, the last until `window_end`. Ties resolve automotive > cycling >
// walking > other. Throws Error(invalid_input) on an empty window.
TravelMode classify_mode(std::span<const TimedMotion> window, UnixMs window_end);

// Trips come back ordered by start_ts with ids "det-<n>"; stores assign their own ids.
std::vector<Trip> detect_trips(const TraceFile& trace, const DetectorConfig& cfg,
                               const DistanceProvider& dist);

// Uses HaversinePathProvider with cfg.winding_factor.
std::vector<Trip> detect_trips(const TraceFile& trace, const DetectorConfig& cfg);

}  // namespace ecoprobe
