#include <doctest.h>

#include "ecoprobe/analytics.hpp"

using namespace ecoprobe;

namespace {

std::vector<InteractionEvent> log_of(std::string_view text) { return parse_interaction_log(text).events; }

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("dwell follows focus within a session") {
  const auto r = compute_dwell(log_of(
      "ts,event\n1000,foreground\n4000,tab:carbon\n9000,tab:cost\n10000,tab:trips\n12000,background\n"));
  CHECK(r.session_count == 1);
  CHECK(r.dwell(AppTab::trips) == 3000 + 2000);
  CHECK(r.dwell(AppTab::carbon) == 5000);
  CHECK(r.dwell(AppTab::cost) == 1000);
  CHECK(r.dwell(AppTab::info) == 0);
  CHECK(r.total_foreground_ms == 11000);
  CHECK(r.total_tab_ms() == r.total_foreground_ms);
}

TEST_CASE("each foreground restarts on the trips tab") {
  const auto r = compute_dwell(log_of(
      "ts,event\n1,foreground\n100,tab:log\n200,background\n1000,foreground\n1500,background\n"));
  CHECK(r.session_count == 2);
  CHECK(r.dwell(AppTab::log) == 100);
  CHECK(r.dwell(AppTab::trips) == 599);
}

TEST_CASE("events outside a session are ignored") {
  const auto r = compute_dwell(log_of("ts,event\n50,tab:cost\n60,background\n100,foreground\n300,background\n400,tab:info\n"));
  CHECK(r.session_count == 1);
  CHECK(r.dwell(AppTab::cost) == 0);
  CHECK(r.dwell(AppTab::info) == 0);
  CHECK(r.dwell(AppTab::trips) == 200);
}

TEST_CASE("a repeated foreground closes the open session") {
  const auto r = compute_dwell(log_of("ts,event\n1,foreground\n100,tab:info\n300,foreground\n400,background\n"));
  CHECK(r.session_count == 2);
  CHECK(r.dwell(AppTab::info) == 200);
  CHECK(r.dwell(AppTab::trips) == 199);
  CHECK(r.total_foreground_ms == 399);
}

TEST_CASE("an unterminated session closes at the last event") {
  const auto r = compute_dwell(log_of("ts,event\n1,foreground\n100,tab:carbon\n700,tab:cost\n"));
  CHECK(r.dwell(AppTab::carbon) == 600);
  CHECK(r.dwell(AppTab::cost) == 0);
  CHECK(r.total_foreground_ms == 699);
  CHECK(compute_dwell({}) == DwellReport{});
}

TEST_CASE("dwell regrouped by display position") {
  DwellReport a;
  a.tab_ms[static_cast<std::size_t>(AppTab::carbon)] = 10;
  a.tab_ms[static_cast<std::size_t>(AppTab::cost)] = 20;
  const std::vector<ParticipantDwell> ps{{"p1", a, DisplayOrder::carbon_first},
                                         {"p2", a, DisplayOrder::cost_first},
                                         {"p3", a, std::nullopt}};
  const auto pairs = dwell_by_display_position(ps);
  CHECK(pairs.participants == std::vector<std::string>{"p1", "p2"});
  CHECK(pairs.second_ms == std::vector<double>{10, 20});
  CHECK(pairs.third_ms == std::vector<double>{20, 10});
  CHECK(pairs.excluded == 1);
}

TEST_CASE("survey parsing") {
  const auto r = parse_survey(
      "participant,phase,topic,item,score\n"
      "p1,pre,cost,instrumental,1\n"
      "p1,post,cost,instrumental,3\n"
      "p1,post,cost,instrumental,4\n"
      "p1,mid,cost,instrumental,1\n"
      ",pre,cost,hedonic,1\n"
      "p2,pre,carbon,want_not_know,-3\n");
  CHECK(r.responses.size() == 3);
  CHECK(r.skipped_lines == 3);
  CHECK(r.responses[2].score == -3);
  CHECK_THROWS_AS(parse_survey("p1,pre,cost,instrumental,1\n"), Error);
}

TEST_CASE("survey tests pair pre and post per item") {
  std::string text = "participant,phase,topic,item,score\n";
  const int pre[] = {0, 1, -1, 0, 2};
  const int post[] = {1, 2, 1, 0, 3};
  for (int i = 0; i < 5; ++i) {
    text += "p" + std::to_string(i) + ",pre,cost,instrumental," + std::to_string(pre[i]) + "\n";
    text += "p" + std::to_string(i) + ",post,cost,instrumental," + std::to_string(post[i]) + "\n";
  }
  text += "p9,post,cost,instrumental,3\n";  // no pre answer
  text += "p0,pre,carbon,hedonic,1\np0,post,carbon,hedonic,2\n";
  const auto results = survey_paired_tests(parse_survey(text).responses);
  CHECK(results.size() == 8);
  for (const auto& r : results) {
    if (r.topic == SurveyTopic::cost && r.item == UtilityItem::instrumental) {
      CHECK(r.pairs == 5);
      REQUIRE(r.test.has_value());
      // d = 1,1,2,0,1
      CHECK(*r.test->estimate == doctest::Approx(1.0));
      const std::vector<double> a(pre, pre + 5), b(post, post + 5);
      CHECK(r.test->p_two_sided == doctest::Approx(stats::paired_t_test(a, b).p_two_sided));
    } else if (r.topic == SurveyTopic::carbon && r.item == UtilityItem::hedonic) {
      CHECK(r.pairs == 1);
      CHECK_FALSE(r.test.has_value());
      CHECK_FALSE(r.error.empty());
    } else {
      CHECK(r.pairs == 0);
    }
  }
}

}
