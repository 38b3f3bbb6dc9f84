#include <doctest.h>

#include <cmath>

#include "ecoprobe/trace_simulator.hpp"

using namespace ecoprobe;

namespace {

Scenario two_drives(std::uint64_t seed, double sigma) {
  Scenario s;
  s.seed = seed;
  s.gps_noise_sigma_m = sigma;
  s.segments = {{SegmentKind::idle, 60, 0, 0},
                {SegmentKind::drive, 300, 10, 0},
                {SegmentKind::drive, 300, 20, 90},
                {SegmentKind::walk, 120, 1.4, 180},
                {SegmentKind::drive, 100, 15, 270}};
  return s;
}

Trip trip_at(UnixMs start, UnixMs end, double miles) {
  Trip t;
  t.start_ts = start;
  t.end_ts = end;
  t.distance_miles = miles;
  return t;
}

}  // namespace

TEST_SUITE("trace_simulator") {

TEST_CASE("samples every period through the end") {
  const auto sim = simulate(two_drives(1, 0));
  // 880 s at 1 s: 881 ticks, one fix and one motion sample each
  CHECK(sim.trace.records.size() == 2 * 881);
  CHECK(sim.trace.records.front().ts == 1'700'000'000'000);
  CHECK(sim.trace.records.back().ts == 1'700'000'880'000);
  CHECK(sim.header_comments == std::vector<std::string>{"generator=mt19937_64+splitmix64 seed=1"});
}

TEST_CASE("consecutive drives form one truth trip") {
  const auto sim = simulate(two_drives(1, 0));
  REQUIRE(sim.truth.trips.size() == 2);
  CHECK(sim.truth.trips[0].start_ts == 1'700'000'060'000);
  CHECK(sim.truth.trips[0].end_ts == 1'700'000'660'000);
  CHECK(sim.truth.trips[0].distance_miles == doctest::Approx(9000.0 / 1609.344));
  CHECK(sim.truth.trips[1].distance_miles == doctest::Approx(1500.0 / 1609.344));
}

TEST_CASE("noise-free positions follow the legs") {
  const auto sim = simulate(two_drives(1, 0));
  const auto at = [&](UnixMs offset_s) {
    for (const auto& r : sim.trace.records) {
      if (r.is_location() && r.ts == 1'700'000'000'000 + offset_s * 1000) return r.location();
    }
    FAIL("no fix");
    return LocationSample{};
  };
  const GeoPoint origin{37.7749, -122.4194};
  CHECK(haversine_meters(origin, at(60).point) == doctest::Approx(0.0));
  CHECK(haversine_meters(origin, at(360).point) == doctest::Approx(3000.0).epsilon(1e-9));
  CHECK(at(200).speed_mps == 10.0);
  CHECK(at(30).speed_mps == 0.0);
  CHECK(at(700).speed_mps == 1.4);
}

TEST_CASE("same seed reproduces the trace byte for byte") {
  CHECK(simulation_trace_csv(simulate(two_drives(9, 7))) == simulation_trace_csv(simulate(two_drives(9, 7))));
  CHECK(simulation_trace_csv(simulate(two_drives(9, 7))) != simulation_trace_csv(simulate(two_drives(10, 7))));
}

TEST_CASE("noise has the configured spread") {
  Scenario s;
  s.seed = 4;
  s.gps_noise_sigma_m = 8;
  s.segments = {{SegmentKind::idle, 20000, 0, 0}};
  const auto sim = simulate(s);
  double sum_sq = 0;
  int n = 0;
  for (const auto& r : sim.trace.records) {
    if (!r.is_location()) continue;
    CHECK(r.location().horizontal_accuracy_m == 8.0);
    const double d = haversine_meters(s.origin, r.location().point);
    sum_sq += d * d;
    ++n;
  }
  // |noise|^2 has mean 2 sigma^2
  CHECK(std::sqrt(sum_sq / n / 2) == doctest::Approx(8.0).epsilon(0.03));
}

TEST_CASE("simulated trace survives the csv round trip") {
  const auto sim = simulate(two_drives(5, 3));
  const auto back = parse_trace(simulation_trace_csv(sim));
  CHECK(back.skipped_lines == 0);
  CHECK(back.trace.records == sim.trace.records);
}

TEST_CASE("scenario json round trip and defaults") {
  const auto s = two_drives(77, 4.5);
  const auto back = parse_scenario_json(scenario_to_json(s));
  CHECK(back.seed == 77);
  CHECK(back.gps_noise_sigma_m == 4.5);
  REQUIRE(back.segments.size() == s.segments.size());
  CHECK(back.segments[2].heading_deg == 90);
  const auto minimal = parse_scenario_json(R"({"segments":[{"kind":"walk","duration_s":10}]})");
  CHECK(minimal.segments[0].speed_mps == 1.4);
  CHECK(minimal.sample_period_s == 1.0);
  CHECK_THROWS_AS(parse_scenario_json(R"({"segments":[{"kind":"fly","duration_s":10}]})"), Error);
  CHECK_THROWS_AS(parse_scenario_json(R"({"segments":[]})"), Error);
  CHECK_THROWS_AS(parse_scenario_json("{"), Error);
  CHECK_THROWS_AS(parse_scenario_json(R"({"segments":[{"kind":"idle","duration_s":-1}]})"), Error);
}

TEST_CASE("ground truth json round trip") {
  const auto sim = simulate(two_drives(1, 0));
  CHECK(parse_ground_truth_json(ground_truth_to_json(sim.truth)) == sim.truth);
  CHECK_THROWS_AS(parse_ground_truth_json(R"({"trips":[{"start_ts":5,"end_ts":5,"distance_miles":1}]})"), Error);
}

TEST_CASE("evaluation matches by truth overlap") {
  const std::vector<TruthTrip> truth{{1000, 2000, 10.0, TravelMode::automotive},
                                     {5000, 6000, 4.0, TravelMode::automotive}};
  const auto ev = evaluate_detection({trip_at(1400, 2100, 10.5), trip_at(5600, 7000, 4.0), trip_at(8000, 9000, 1)},
                                     truth);
  CHECK(ev.matched == 1);  // the second overlaps 40%
  CHECK(ev.precision == doctest::Approx(1.0 / 3));
  CHECK(ev.recall == 0.5);
  CHECK(*ev.median_distance_error_fraction == doctest::Approx(0.05));

  const auto loose = evaluate_detection({trip_at(1400, 2100, 10.5), trip_at(5600, 7000, 4.0)}, truth, 0.4);
  CHECK(loose.matched == 2);
  CHECK(*loose.median_distance_error_fraction == doctest::Approx(0.025));
}

TEST_CASE("one detection matches at most one truth trip") {
  const std::vector<TruthTrip> truth{{1000, 2000, 1, TravelMode::automotive}, {2000, 3000, 1, TravelMode::automotive}};
  const auto ev = evaluate_detection({trip_at(1000, 3000, 2)}, truth);
  CHECK(ev.matched == 1);
  CHECK(ev.recall == 0.5);
  CHECK(ev.precision == 1.0);
}

TEST_CASE("empty sides") {
  const auto none = evaluate_detection({}, {{1000, 2000, 1, TravelMode::automotive}});
  CHECK(none.zero_detections);
  CHECK(none.precision == 1.0);
  CHECK(none.recall == 0.0);
  CHECK_FALSE(none.median_distance_error_fraction.has_value());
  const auto no_truth = evaluate_detection({trip_at(1, 2, 1)}, {});
  CHECK(no_truth.recall == 1.0);
  CHECK(no_truth.precision == 0.0);
}

}
