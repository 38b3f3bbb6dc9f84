#include "ecoprobe/trip_detector.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

namespace ecoprobe {

void DetectorConfig::validate() const {
  auto in = [](double v, double lo, double hi) { return std::isfinite(v) && v >= lo && v <= hi; };
  if (!in(min_auto_confidence, 0.0, 1.0)) invalid("min_auto_confidence must be in [0, 1]");
  if (!in(start_speed_mps, 0.0, 1e3)) invalid("start_speed_mps must be non-negative");
  if (end_dwell_ms <= 0) invalid("end_dwell_ms must be positive");
  if (!in(min_trip_distance_miles, 0.0, 1e6)) invalid("min_trip_distance_miles must be >= 0");
  if (!in(winding_factor, 1.0, 1e3)) invalid("winding_factor must be >= 1");
  if (motion_proximity_ms < 0) invalid("motion_proximity_ms must be >= 0");
  if (!in(jitter_accuracy_multiple, 0.0, 1e3)) invalid("jitter_accuracy_multiple must be >= 0");
}

double path_distance(std::span<const GeoPoint> points, double winding_factor) {
  if (points.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) sum += haversine_miles(points[i - 1], points[i]);
  return sum * winding_factor;
}

HaversinePathProvider::HaversinePathProvider(double winding_factor)
    : winding_factor_(winding_factor) {
  if (!std::isfinite(winding_factor) || winding_factor < 1.0) invalid("winding_factor must be >= 1");
}

double HaversinePathProvider::route_miles(std::span<const GeoPoint> points) const {
  return path_distance(points, winding_factor_);
}

namespace {

TravelMode mode_of(Activity a) {
  switch (a) {
    case Activity::automotive: return TravelMode::automotive;
    case Activity::walking:
    case Activity::running: return TravelMode::walking;
    case Activity::cycling: return TravelMode::cycling;
    case Activity::stationary:
    case Activity::unknown: return TravelMode::other;
  }
  return TravelMode::other;
}

struct Fix {
  UnixMs ts;
  GeoPoint point;
  double accuracy_m;
  double speed_mps;
};

std::vector<Fix> collect_fixes(const TraceFile& trace) {
  std::vector<Fix> fixes;
  for (const auto& r : trace.records) {
    if (!r.is_location()) continue;
    const auto& loc = r.location();
    double speed = 0.0;
    if (loc.speed_mps) {
      speed = *loc.speed_mps;
    } else if (!fixes.empty() && r.ts > fixes.back().ts) {
      // chord over elapsed time
      const auto& prev = fixes.back();
      speed = haversine_meters(prev.point, loc.point) / (static_cast<double>(r.ts - prev.ts) / 1000.0);
    }
    fixes.push_back({r.ts, loc.point, loc.horizontal_accuracy_m, speed});
  }
  return fixes;
}

std::vector<GeoPoint> route_points(std::span<const Fix> fixes, double accuracy_multiple) {
  std::vector<GeoPoint> pts;
  if (fixes.empty()) return pts;
  pts.push_back(fixes.front().point);
  const Fix* kept = &fixes.front();
  for (std::size_t i = 1; i + 1 < fixes.size(); ++i) {
    const double min_leg = accuracy_multiple * std::max(kept->accuracy_m, fixes[i].accuracy_m);
    if (haversine_meters(kept->point, fixes[i].point) >= min_leg) {
      pts.push_back(fixes[i].point);
      kept = &fixes[i];
    }
  }
  if (fixes.size() > 1) pts.push_back(fixes.back().point);
  return pts;
}

}  // namespace

TravelMode classify_mode(std::span<const TimedMotion> window, UnixMs window_end) {
  if (window.empty()) invalid("classify_mode: empty window");

  // Indexed by tie-break priority.
  constexpr std::array kOrder{TravelMode::automotive, TravelMode::cycling, TravelMode::walking,
                              TravelMode::other};
  auto slot = [&](TravelMode m) {
    return static_cast<std::size_t>(std::find(kOrder.begin(), kOrder.end(), m) - kOrder.begin());
  };

  std::array<double, kOrder.size()> score{};
  double total_ms = 0.0;
  for (std::size_t i = 0; i < window.size(); ++i) {
    const UnixMs end = i + 1 < window.size() ? window[i + 1].ts : window_end;
    total_ms += static_cast<double>(std::max<UnixMs>(0, end - window[i].ts));
  }
  for (std::size_t i = 0; i < window.size(); ++i) {
    const UnixMs end = i + 1 < window.size() ? window[i + 1].ts : window_end;
    // Degenerate windows with no elapsed time weigh every sample equally.
    const double dur = total_ms > 0.0 ? static_cast<double>(std::max<UnixMs>(0, end - window[i].ts))
                                      : 1.0;
    score[slot(mode_of(window[i].sample.activity))] += window[i].sample.confidence * dur;
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < score.size(); ++k) {
    if (score[k] > score[best]) best = k;
  }
  return kOrder[best];
}

std::vector<Trip> detect_trips(const TraceFile& trace, const DetectorConfig& cfg,
                               const DistanceProvider& dist) {
  cfg.validate();
  const auto fixes = collect_fixes(trace);

  std::vector<TimedMotion> motion;
  std::vector<UnixMs> auto_ts;
  for (const auto& r : trace.records) {
    if (!r.is_motion()) continue;
    motion.push_back({r.ts, r.motion()});
    if (r.motion().activity == Activity::automotive &&
        r.motion().confidence >= cfg.min_auto_confidence) {
      auto_ts.push_back(r.ts);
    }
  }

  auto near_automotive = [&](UnixMs ts) {
    auto it = std::lower_bound(auto_ts.begin(), auto_ts.end(), ts - cfg.motion_proximity_ms);
    return it != auto_ts.end() && *it <= ts + cfg.motion_proximity_ms;
  };

  std::vector<Trip> trips;
  auto close_trip = [&](std::size_t first, std::size_t last) {
    const auto& a = fixes[first];
    const auto& b = fixes[last];
    if (b.ts <= a.ts) return;

    const std::span<const Fix> span(fixes.data() + first, last - first + 1);
    const auto pts = route_points(span, cfg.jitter_accuracy_multiple);
    const double miles = dist.route_miles(pts);
    if (miles < cfg.min_trip_distance_miles) return;

    auto lo = std::lower_bound(motion.begin(), motion.end(), a.ts - cfg.motion_proximity_ms,
                               [](const TimedMotion& m, UnixMs ts) { return m.ts < ts; });
    auto hi = std::upper_bound(motion.begin(), motion.end(), b.ts,
                               [](UnixMs ts, const TimedMotion& m) { return ts < m.ts; });
    const std::span<const TimedMotion> window(motion.data() + (lo - motion.begin()),
                                             static_cast<std::size_t>(hi - lo));
    const TravelMode mode = window.empty() ? TravelMode::automotive : classify_mode(window, b.ts);

    Trip t;
    t.id = fmt::format("det-{}", trips.size());
    t.start_ts = a.ts;
    t.end_ts = b.ts;
    t.origin = a.point;
    t.destination = b.point;
    t.distance_miles = miles;
    t.mode = mode;
    trips.push_back(std::move(t));
  };

  bool in_trip = false;
  std::size_t first = 0;
  std::size_t last_fast = 0;
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    const auto& f = fixes[i];
    const bool fast = f.speed_mps >= cfg.start_speed_mps;
    if (in_trip && f.ts - fixes[last_fast].ts > cfg.end_dwell_ms) {
      close_trip(first, last_fast);
      in_trip = false;
    }
    if (!fast) continue;
    if (in_trip) {
      last_fast = i;
    } else if (near_automotive(f.ts)) {
      in_trip = true;
      first = last_fast = i;
    }
  }
  if (in_trip) close_trip(first, last_fast);
  return trips;
}

std::vector<Trip> detect_trips(const TraceFile& trace, const DetectorConfig& cfg) {
  return detect_trips(trace, cfg, HaversinePathProvider(cfg.winding_factor));
}

}  // namespace ecoprobe
