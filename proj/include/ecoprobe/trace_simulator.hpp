#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoprobe/domain.hpp"
#include "ecoprobe/trace_io.hpp"

namespace ecoprobe {

inline constexpr std::string_view kSimulatorGenerator = "mt19937_64+splitmix64";

enum class SegmentKind { drive, walk, idle };

std::string_view to_string(SegmentKind k);

struct ScenarioSegment {
  SegmentKind kind{SegmentKind::idle};
  double duration_s{0.0};
  double speed_mps{0.0};  // ignored for idle
  double heading_deg{0.0};
};

struct Scenario {
  std::uint64_t seed{0};
  UnixMs start_ts{1'700'000'000'000};
  GeoPoint origin{37.7749, -122.4194};
  std::vector<ScenarioSegment> segments;
  double sample_period_s{1.0};
  double gps_noise_sigma_m{0.0};
  double motion_confidence{0.9};

  void validate() const;
};

// JSON form:
// {"seed":7,"start_ts":..,"origin":{"lat":..,"lon":..},"sample_period_s":1,
//  "gps_noise_sigma_m":5,"motion_confidence":0.9,
//  "segments":[{"kind":"drive","duration_s":600,"speed_mps":15,"heading_deg":90}]}
Scenario parse_scenario_json(std::string_view text);
std::string scenario_to_json(const Scenario& s);

struct TruthTrip {
  UnixMs start_ts{0};
  UnixMs end_ts{0};
  double distance_miles{0.0};
  TravelMode mode{TravelMode::automotive};

  friend bool operator==(const TruthTrip&, const TruthTrip&) = default;
};

struct GroundTruth {
  std::vector<TruthTrip> trips;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

std::string ground_truth_to_json(const GroundTruth& truth);
GroundTruth parse_ground_truth_json(std::string_view text);

struct Simulation {
  TraceFile trace;
  GroundTruth truth;
  std::vector<std::string> header_comments;  // generator name and seed
};

// Location and motion samples every sample_period_s from start_ts through the end of the
// last segment. Positions follow great-circle legs per segment; fixes carry isotropic
// Gaussian tangent-plane noise and report accuracy = sigma and the true speed.
// Consecutive drive segments form one ground-truth trip.
Simulation simulate(const Scenario& scenario);

// Canonical trace CSV with the generator comment lines.
std::string simulation_trace_csv(const Simulation& sim);

struct DetectionEvaluation {
  std::size_t detected{0};
  std::size_t truth{0};
  std::size_t matched{0};
  double precision{1.0};  // 1 when nothing was detected (see zero_detections)
  double recall{1.0};     // 1 when there is no truth trip
  bool zero_detections{false};
  std::optional<double> median_distance_error_fraction;  // unset when nothing matched
};

// Greedy one-to-one matching in time order: a detected trip matches the earliest
// unmatched truth trip it overlaps by at least `match_overlap` of the truth duration.
DetectionEvaluation evaluate_detection(const std::vector<Trip>& detected,
                                       const std::vector<TruthTrip>& truth,
                                       double match_overlap = 0.5);

}  // namespace ecoprobe
