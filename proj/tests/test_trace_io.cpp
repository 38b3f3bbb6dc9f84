#include <doctest.h>

#include <random>

#include "ecoprobe/trace_io.hpp"

using namespace ecoprobe;

namespace {

TraceFile random_trace(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
  std::uniform_real_distribution<double> acc(0.0, 100.0), speed(0.0, 60.0), conf(0.0, 1.0);
  std::uniform_int_distribution<int> step(0, 3000), kind(0, 2), act(0, 5);
  TraceFile t;
  UnixMs ts = 1'700'000'000'000;
  for (std::size_t i = 0; i < n; ++i) {
    ts += step(rng);
    const int k = kind(rng);
    if (k == 2) {
      t.records.push_back({ts, MotionSample{static_cast<Activity>(act(rng)), conf(rng)}});
    } else {
      LocationSample loc{{lat(rng), lon(rng)}, acc(rng), std::nullopt};
      if (k == 1) loc.speed_mps = speed(rng);
      t.records.push_back({ts, loc});
    }
  }
  return t;
}

}  // namespace

TEST_SUITE("trace_io") {

TEST_CASE("parses the documented example") {
  const auto r = parse_trace(
      "# recorded on a phone\n"
      "ts,kind,lat,lon,acc,speed,activity,confidence\n"
      "1000,loc,37.0,-122.0,5.0,12.0,,\n"
      "1000,motion,,,,,automotive,0.9\n"
      "2000,loc,37.001,-122.0,8,,,\r\n");
  REQUIRE(r.trace.records.size() == 3);
  CHECK(r.skipped_lines == 0);
  CHECK(r.trace.records[0].location().speed_mps == 12.0);
  CHECK(r.trace.records[1].motion().activity == Activity::automotive);
  CHECK(r.trace.records[1].motion().confidence == 0.9);
  CHECK_FALSE(r.trace.records[2].location().speed_mps.has_value());
}

TEST_CASE("header and empty input") {
  CHECK_THROWS_WITH_AS(parse_trace(""), "missing header", Error);
  CHECK_THROWS_WITH_AS(parse_trace("1000,loc,37,-122,5,,,\n"), "missing header", Error);
  CHECK_THROWS_WITH_AS(parse_trace("ts,kind,lat,lon,acc,speed,activity,confidence\n"), "no records",
                       Error);
  CHECK_THROWS_WITH_AS(parse_trace("ts,kind,lat,lon,acc,speed,activity,confidence\nbad\n"),
                       "no records", Error);
}

TEST_CASE("malformed lines are skipped and counted") {
  const auto r = parse_trace(
      "ts,kind,lat,lon,acc,speed,activity,confidence\n"
      "1000,loc,91.0,-122.0,5.0,,,\n"       // latitude out of range
      "1000,loc,37.0,-122.0,-1,,,\n"        // negative accuracy
      "1000,motion,,,,,flying,0.9\n"        // unknown activity
      "1000,motion,,,,,walking,1.5\n"       // confidence out of range
      "-5,loc,37.0,-122.0,5,,,\n"           // bad timestamp
      "1000,loc,37.0,-122.0,5,,,,\n"        // extra column
      "1000,loc,nan,-122.0,5,,,\n"
      "1000,loc,37.0,-122.0,5,-3,,\n"       // negative speed
      "1500,loc,37.0,-122.0,5,,,\n");
  CHECK(r.skipped_lines == 8);
  CHECK(r.trace.records.size() == 1);
}

TEST_CASE("records are stably sorted by timestamp") {
  const auto r = parse_trace(
      "ts,kind,lat,lon,acc,speed,activity,confidence\n"
      "3000,loc,3,0,5,,,\n"
      "1000,loc,1,0,5,,,\n"
      "2000,loc,2,0,5,,,\n"
      "2000,motion,,,,,walking,0.5\n"
      "2000,loc,2.5,0,5,,,\n");
  REQUIRE(r.trace.records.size() == 5);
  CHECK(r.trace.records[0].location().point.lat == 1);
  CHECK(r.trace.records[1].location().point.lat == 2);
  CHECK(r.trace.records[2].is_motion());
  CHECK(r.trace.records[3].location().point.lat == 2.5);
  CHECK(r.trace.records[4].ts == 3000);
}

TEST_CASE("trace serialize then parse is the identity") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const auto t = random_trace(rng, 1 + rng() % 60);
    const auto text = serialize_trace(t, {"generator=test", "seed=21"});
    const auto back = parse_trace(text);
    CHECK(back.skipped_lines == 0);
    CHECK(back.trace.records == t.records);
    CHECK(serialize_trace(back.trace, {"generator=test", "seed=21"}) == text);
  }
}

TEST_CASE("trace parser survives garbage") {
  std::mt19937_64 rng(22);
  const std::string alphabet = "0123456789,.-+eE\n\r#locmtinwakg ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string text = "ts,kind,lat,lon,acc,speed,activity,confidence\n";
    const std::size_t len = rng() % 200;
    for (std::size_t j = 0; j < len; ++j) text += alphabet[pick(rng)];
    try {
      const auto r = parse_trace(text);
      for (std::size_t k = 1; k < r.trace.records.size(); ++k) {
        CHECK(r.trace.records[k - 1].ts <= r.trace.records[k].ts);
      }
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_input);
    }
  }
}

TEST_CASE("interaction log round trip keeps input order") {
  const std::vector<InteractionEvent> events{{5000, UiEvent::foreground},
                                             {4000, UiEvent::tab_cost},
                                             {6000, UiEvent::background}};
  const auto text = serialize_interaction_log(events);
  CHECK(text == "ts,event\n5000,foreground\n4000,tab:cost\n6000,background\n");
  const auto back = parse_interaction_log(text);
  CHECK(back.events == events);
  CHECK(back.skipped_lines == 0);
}

TEST_CASE("interaction log rejects unknown tags per line") {
  const auto r = parse_interaction_log("ts,event\n1,foreground\n2,tab:settings\nx,background\n3,background\n");
  CHECK(r.events.size() == 2);
  CHECK(r.skipped_lines == 2);
  CHECK_THROWS_WITH_AS(parse_interaction_log("1,foreground\n"), "missing header", Error);
}

TEST_CASE("ui event tags") {
  for (auto e : {UiEvent::foreground, UiEvent::background, UiEvent::tab_trips, UiEvent::tab_carbon,
                 UiEvent::tab_cost, UiEvent::tab_info, UiEvent::tab_log}) {
    CHECK(parse_ui_event_tag(to_tag(e)) == e);
  }
  CHECK(to_tag(UiEvent::tab_carbon) == "tab:carbon");
  CHECK_FALSE(parse_ui_event_tag("tab:").has_value());
}

TEST_CASE("csv helpers") {
  CHECK(csv::split("a,,b").size() == 3);
  CHECK(csv::split("").size() == 1);
  CHECK(csv::parse_int("12") == 12);
  CHECK_FALSE(csv::parse_int("12x").has_value());
  CHECK_FALSE(csv::parse_int("").has_value());
  CHECK(csv::parse_double("1e3") == 1000.0);
  CHECK_FALSE(csv::parse_double("inf").has_value());
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::parse_double(csv::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

}
