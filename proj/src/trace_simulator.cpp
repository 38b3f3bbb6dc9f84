#include "ecoprobe/trace_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

namespace ecoprobe {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Box-Muller over raw 64-bit draws; std::normal_distribution is not portable
// across standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (cached_) {
      const double v = *cached_;
      cached_.reset();
      return v;
    }
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_;
};

UnixMs to_ms(double seconds) { return static_cast<UnixMs>(std::llround(seconds * 1000.0)); }

Activity activity_of(SegmentKind k) {
  switch (k) {
    case SegmentKind::drive: return Activity::automotive;
    case SegmentKind::walk: return Activity::walking;
    case SegmentKind::idle: return Activity::stationary;
  }
  return Activity::unknown;
}

double moving_speed(const ScenarioSegment& s) {
  return s.kind == SegmentKind::idle ? 0.0 : s.speed_mps;
}

}  // namespace

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::drive: return "drive";
    case SegmentKind::walk: return "walk";
    case SegmentKind::idle: return "idle";
  }
  return "idle";
}

void Scenario::validate() const {
  if (segments.empty()) invalid("scenario: no segments");
  if (!std::isfinite(sample_period_s) || sample_period_s <= 0.0 || to_ms(sample_period_s) <= 0) {
    invalid("scenario: sample_period_s must be positive");
  }
  if (!std::isfinite(gps_noise_sigma_m) || gps_noise_sigma_m < 0.0) {
    invalid("scenario: gps_noise_sigma_m must be >= 0");
  }
  if (!(motion_confidence >= 0.0 && motion_confidence <= 1.0)) {
    invalid("scenario: motion_confidence must be in [0, 1]");
  }
  if (start_ts <= 0) invalid("scenario: start_ts must be positive");
  if (!is_valid(origin)) invalid("scenario: invalid origin");
  for (const auto& s : segments) {
    if (!std::isfinite(s.duration_s) || s.duration_s <= 0.0 || to_ms(s.duration_s) <= 0) {
      invalid("scenario: segment duration must be positive");
    }
    if (!std::isfinite(s.speed_mps) || s.speed_mps < 0.0) invalid("scenario: speed must be >= 0");
    if (!std::isfinite(s.heading_deg)) invalid("scenario: heading must be finite");
  }
}

Scenario parse_scenario_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    Scenario s;
    s.seed = j.value("seed", std::uint64_t{0});
    s.start_ts = j.value("start_ts", s.start_ts);
    if (j.contains("origin")) {
      s.origin = GeoPoint{j.at("origin").at("lat").get<double>(), j.at("origin").at("lon").get<double>()};
    }
    s.sample_period_s = j.value("sample_period_s", s.sample_period_s);
    s.gps_noise_sigma_m = j.value("gps_noise_sigma_m", s.gps_noise_sigma_m);
    s.motion_confidence = j.value("motion_confidence", s.motion_confidence);
    for (const auto& js : j.at("segments")) {
      ScenarioSegment seg;
      const auto kind = js.at("kind").get<std::string>();
      if (kind == "drive") {
        seg.kind = SegmentKind::drive;
      } else if (kind == "walk") {
        seg.kind = SegmentKind::walk;
      } else if (kind == "idle") {
        seg.kind = SegmentKind::idle;
      } else {
        invalid(fmt::format("scenario: unknown segment kind '{}'", kind));
      }
      seg.duration_s = js.at("duration_s").get<double>();
      seg.speed_mps = js.value("speed_mps", seg.kind == SegmentKind::walk ? 1.4 : 0.0);
      seg.heading_deg = js.value("heading_deg", 0.0);
      s.segments.push_back(seg);
    }
    s.validate();
    return s;
  } catch (const json::exception& e) {
    invalid(fmt::format("scenario: {}", e.what()));
  }
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["seed"] = s.seed;
  j["start_ts"] = s.start_ts;
  j["origin"] = {{"lat", s.origin.lat}, {"lon", s.origin.lon}};
  j["sample_period_s"] = s.sample_period_s;
  j["gps_noise_sigma_m"] = s.gps_noise_sigma_m;
  j["motion_confidence"] = s.motion_confidence;
  j["segments"] = json::array();
  for (const auto& seg : s.segments) {
    j["segments"].push_back({{"kind", to_string(seg.kind)},
                             {"duration_s", seg.duration_s},
                             {"speed_mps", seg.speed_mps},
                             {"heading_deg", seg.heading_deg}});
  }
  return j.dump(2) + "\n";
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  json j;
  j["trips"] = json::array();
  for (const auto& t : truth.trips) {
    j["trips"].push_back({{"start_ts", t.start_ts},
                          {"end_ts", t.end_ts},
                          {"distance_miles", t.distance_miles},
                          {"mode", to_string(t.mode)}});
  }
  return j.dump(2) + "\n";
}

GroundTruth parse_ground_truth_json(std::string_view text) {
  try {
    const auto j = json::parse(text);
    GroundTruth g;
    for (const auto& jt : j.at("trips")) {
      TruthTrip t;
      t.start_ts = jt.at("start_ts").get<UnixMs>();
      t.end_ts = jt.at("end_ts").get<UnixMs>();
      t.distance_miles = jt.at("distance_miles").get<double>();
      const auto mode = parse_travel_mode(jt.value("mode", std::string("automotive")));
      if (!mode) invalid("ground truth: unknown mode");
      t.mode = *mode;
      if (t.end_ts <= t.start_ts) invalid("ground truth: end_ts must follow start_ts");
      g.trips.push_back(t);
    }
    return g;
  } catch (const json::exception& e) {
    invalid(fmt::format("ground truth: {}", e.what()));
  }
}

Simulation simulate(const Scenario& scenario) {
  scenario.validate();
  const auto& segs = scenario.segments;

  std::vector<UnixMs> seg_start(segs.size() + 1, 0);
  std::vector<GeoPoint> seg_origin(segs.size() + 1, scenario.origin);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const UnixMs dur = to_ms(segs[i].duration_s);
    seg_start[i + 1] = seg_start[i] + dur;
    const double dist_m = moving_speed(segs[i]) * static_cast<double>(dur) / 1000.0;
    seg_origin[i + 1] = dist_m > 0.0 ? destination_point(seg_origin[i], segs[i].heading_deg, dist_m)
                                     : seg_origin[i];
  }
  const UnixMs total = seg_start.back();
  const UnixMs period = to_ms(scenario.sample_period_s);

  std::uint64_t split_state = scenario.seed;
  GaussianSource noise(splitmix64(split_state));
  const double sigma = scenario.gps_noise_sigma_m;

  Simulation sim;
  sim.header_comments = {fmt::format("generator={} seed={}", kSimulatorGenerator, scenario.seed)};

  std::size_t seg = 0;
  for (UnixMs t = 0; t <= total; t += period) {
    while (seg + 1 < segs.size() && t >= seg_start[seg + 1]) ++seg;
    const auto& s = segs[seg];
    const double travelled_m =
        moving_speed(s) * static_cast<double>(t - seg_start[seg]) / 1000.0;
    GeoPoint p = travelled_m > 0.0 ? destination_point(seg_origin[seg], s.heading_deg, travelled_m)
                                   : seg_origin[seg];
    if (sigma > 0.0) {
      const double north = noise.next() * sigma;
      const double east = noise.next() * sigma;
      const double lat_rad = p.lat * std::numbers::pi / 180.0;
      p.lat += north / kEarthRadiusM * 180.0 / std::numbers::pi;
      p.lon += east / (kEarthRadiusM * std::cos(lat_rad)) * 180.0 / std::numbers::pi;
      p.lat = std::clamp(p.lat, -90.0, 90.0);
      p.lon = std::fmod(p.lon + 540.0, 360.0) - 180.0;
    }
    const UnixMs ts = scenario.start_ts + t;
    sim.trace.records.push_back({ts, LocationSample{p, sigma, moving_speed(s)}});
    sim.trace.records.push_back(
        {ts, MotionSample{activity_of(s.kind), scenario.motion_confidence}});
  }

  for (std::size_t i = 0; i < segs.size();) {
    if (segs[i].kind != SegmentKind::drive) {
      ++i;
      continue;
    }
    TruthTrip trip;
    trip.start_ts = scenario.start_ts + seg_start[i];
    double meters = 0.0;
    while (i < segs.size() && segs[i].kind == SegmentKind::drive) {
      meters += segs[i].speed_mps * static_cast<double>(seg_start[i + 1] - seg_start[i]) / 1000.0;
      ++i;
    }
    trip.end_ts = scenario.start_ts + seg_start[i];
    trip.distance_miles = meters / kMetersPerMile;
    trip.mode = TravelMode::automotive;
    sim.truth.trips.push_back(trip);
  }
  return sim;
}

std::string simulation_trace_csv(const Simulation& sim) {
  return serialize_trace(sim.trace, sim.header_comments);
}

DetectionEvaluation evaluate_detection(const std::vector<Trip>& detected,
                                       const std::vector<TruthTrip>& truth, double match_overlap) {
  DetectionEvaluation ev;
  ev.detected = detected.size();
  ev.truth = truth.size();

  std::vector<bool> truth_used(truth.size(), false);
  std::vector<double> errors;
  for (const auto& d : detected) {
    for (std::size_t k = 0; k < truth.size(); ++k) {
      if (truth_used[k]) continue;
      const auto& t = truth[k];
      const UnixMs overlap = std::min(d.end_ts, t.end_ts) - std::max(d.start_ts, t.start_ts);
      const double frac = static_cast<double>(std::max<UnixMs>(0, overlap)) /
                          static_cast<double>(t.end_ts - t.start_ts);
      if (frac >= match_overlap) {
        truth_used[k] = true;
        ++ev.matched;
        errors.push_back(t.distance_miles > 0.0
                             ? std::fabs(d.distance_miles - t.distance_miles) / t.distance_miles
                             : 0.0);
        break;
      }
    }
  }

  ev.zero_detections = detected.empty();
  ev.precision = detected.empty() ? 1.0 : static_cast<double>(ev.matched) / static_cast<double>(detected.size());
  ev.recall = truth.empty() ? 1.0 : static_cast<double>(ev.matched) / static_cast<double>(truth.size());
  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    const std::size_t m = errors.size();
    ev.median_distance_error_fraction =
        m % 2 == 1 ? errors[m / 2] : 0.5 * (errors[m / 2 - 1] + errors[m / 2]);
  }
  return ev;
}

}  // namespace ecoprobe
