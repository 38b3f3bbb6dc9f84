#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ecoprobe/domain.hpp"

using namespace ecoprobe;

namespace {

// Spherical law of cosines, an independent route to the same great-circle distance.
double cosine_law_m(GeoPoint a, GeoPoint b) {
  const double k = std::numbers::pi / 180.0;
  const double c = std::sin(a.lat * k) * std::sin(b.lat * k) +
                   std::cos(a.lat * k) * std::cos(b.lat * k) * std::cos((b.lon - a.lon) * k);
  return kEarthRadiusM * std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

TEST_SUITE("domain") {

TEST_CASE("haversine hand values") {
  const double deg_m = kEarthRadiusM * std::numbers::pi / 180.0;  // 111195.08 m
  CHECK(haversine_meters({0, 0}, {1, 0}) == doctest::Approx(deg_m).epsilon(1e-12));
  CHECK(haversine_meters({0, 0}, {0, 1}) == doctest::Approx(deg_m).epsilon(1e-12));
  CHECK(haversine_meters({0, 0}, {0, 90}) == doctest::Approx(deg_m * 90).epsilon(1e-12));
  CHECK(haversine_meters({0, 0}, {0, 180}) == doctest::Approx(kEarthRadiusM * std::numbers::pi));
  CHECK(haversine_meters({90, 0}, {-90, 0}) == doctest::Approx(kEarthRadiusM * std::numbers::pi));
  CHECK(haversine_meters({37.5, -122.25}, {37.5, -122.25}) == 0.0);
  CHECK(haversine_miles({0, 0}, {1, 0}) == doctest::Approx(deg_m / 1609.344).epsilon(1e-12));
  // 60 degrees of latitude at 60N is half as long per degree of longitude
  CHECK(haversine_meters({60, 0}, {60, 0.001}) == doctest::Approx(deg_m * 0.0005).epsilon(1e-6));
}

TEST_CASE("haversine agrees with the cosine law and is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lat(-89.0, 89.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 2000; ++i) {
    const GeoPoint a{lat(rng), lon(rng)};
    const GeoPoint b{lat(rng), lon(rng)};
    const double h = haversine_meters(a, b);
    CHECK(h == doctest::Approx(haversine_meters(b, a)).epsilon(1e-12));
    CHECK(h >= 0.0);
    CHECK(h <= kEarthRadiusM * std::numbers::pi * (1 + 1e-12));
    if (h > 10'000.0) CHECK(h == doctest::Approx(cosine_law_m(a, b)).epsilon(1e-9));
  }
}

TEST_CASE("haversine triangle inequality") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lat(-80.0, 80.0);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  for (int i = 0; i < 1000; ++i) {
    const GeoPoint a{lat(rng), lon(rng)}, b{lat(rng), lon(rng)}, c{lat(rng), lon(rng)};
    CHECK(haversine_meters(a, c) <= haversine_meters(a, b) + haversine_meters(b, c) + 1e-6);
  }
}

TEST_CASE("destination point travels the requested distance") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> lat(-70.0, 70.0);
  std::uniform_real_distribution<double> lon(-179.0, 179.0);
  std::uniform_real_distribution<double> heading(0.0, 360.0);
  std::uniform_real_distribution<double> dist(1.0, 200'000.0);
  for (int i = 0; i < 500; ++i) {
    const GeoPoint a{lat(rng), lon(rng)};
    const double d = dist(rng);
    const GeoPoint b = destination_point(a, heading(rng), d);
    CHECK(is_valid(b));
    CHECK(haversine_meters(a, b) == doctest::Approx(d).epsilon(1e-9));
  }
  const GeoPoint north = destination_point({0, 0}, 0.0, kEarthRadiusM * std::numbers::pi / 180.0);
  CHECK(north.lat == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(north.lon) < 1e-12);
}

TEST_CASE("geo point validation") {
  CHECK_NOTHROW(GeoPoint::make(90, 180));
  CHECK_THROWS_AS(GeoPoint::make(90.1, 0), Error);
  CHECK_THROWS_AS(GeoPoint::make(0, -180.5), Error);
  CHECK_THROWS_AS(GeoPoint::make(std::nan(""), 0), Error);
  CHECK_FALSE(is_valid({0, INFINITY}));
}

TEST_CASE("trip validation") {
  Trip t;
  t.id = "t";
  t.start_ts = 1000;
  t.end_ts = 2000;
  t.origin = {37.0, -122.0};
  t.destination = {37.01, -122.0};
  t.distance_miles = haversine_miles(t.origin, t.destination);
  CHECK_NOTHROW(validate(t));
  t.distance_miles *= 0.5;
  CHECK_THROWS_AS(validate(t), Error);
  t.distance_miles = 5.0;
  t.end_ts = 1000;
  CHECK_THROWS_AS(validate(t), Error);
  t.end_ts = 2000;
  t.distance_miles = -1.0;
  CHECK_THROWS_AS(validate(t), Error);
}

TEST_CASE("money and emission fixed point") {
  CHECK(Money::from_usd(1.28333).ticks() == 12833);
  CHECK(Money::from_usd(1.28333).to_cents_string() == "1.28");
  CHECK(Money::from_ticks(12850).to_cents_string() == "1.29");
  CHECK(Money::from_ticks(12849).to_cents_string() == "1.28");
  CHECK(Money::from_ticks(5).to_cents_string() == "0.00");
  CHECK(Money::from_ticks(1'000'000).to_cents_string() == "100.00");
  CHECK((Money::from_ticks(1) + Money::from_ticks(2)).ticks() == 3);
  CHECK(Emission::from_kg(2.9623).ticks() == 2'962'300);
  CHECK(Emission::from_ticks(2'962'500).kg_rounded3() == 2.963);
  CHECK(Emission::from_ticks(2'962'499).kg_rounded3() == 2.962);
  CHECK_THROWS_AS(Money::from_usd(std::nan("")), Error);
}

TEST_CASE("tab order") {
  const auto a = tab_sequence(DisplayOrder::carbon_first);
  const auto b = tab_sequence(DisplayOrder::cost_first);
  CHECK(a[0] == AppTab::trips);
  CHECK(b[0] == AppTab::trips);
  CHECK(a[1] == AppTab::carbon);
  CHECK(a[2] == AppTab::cost);
  CHECK(b[1] == AppTab::cost);
  CHECK(b[2] == AppTab::carbon);
  CHECK(a[3] == AppTab::info);
  CHECK(a[4] == AppTab::log);
  for (auto t : {AppTab::trips, AppTab::carbon, AppTab::cost, AppTab::info, AppTab::log}) {
    CHECK(parse_app_tab(to_string(t)) == t);
  }
  CHECK(parse_display_order(to_string(DisplayOrder::cost_first)) == DisplayOrder::cost_first);
  CHECK_FALSE(parse_app_tab("settings").has_value());
}

TEST_CASE("time range is half open") {
  const TimeRange r{10, 20};
  CHECK(r.contains(10));
  CHECK(r.contains(19));
  CHECK_FALSE(r.contains(20));
  CHECK(TimeRange::all().contains(0));
}

}
