#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoprobe/domain.hpp"
#include "ecoprobe/stats.hpp"
#include "ecoprobe/trace_io.hpp"

namespace ecoprobe {

struct DwellReport {
  std::array<std::int64_t, kAppTabCount> tab_ms{};  // indexed by AppTab
  std::size_t session_count{0};
  std::int64_t total_foreground_ms{0};

  std::int64_t dwell(AppTab t) const { return tab_ms[static_cast<std::size_t>(t)]; }
  std::int64_t total_tab_ms() const;
  friend bool operator==(const DwellReport&, const DwellReport&) = default;
};

// Sessionizes a time-ordered log. A foreground event opens a session focused on the
// trips tab; tab events move focus; background closes the session. A repeated
// foreground closes the open session first. Events outside a session are ignored, and
// a session still open at the end of the log is closed at the last event.
DwellReport compute_dwell(const std::vector<InteractionEvent>& events);

struct ParticipantDwell {
  std::string participant;
  DwellReport report;
  std::optional<DisplayOrder> order;
};

// Carbon/cost dwell regrouped by display position: `second` holds the dwell of the tab
// shown second, `third` the one shown third.
struct PositionPairs {
  std::vector<std::string> participants;
  std::vector<double> second_ms;
  std::vector<double> third_ms;
  std::size_t excluded{0};  // participants without a recorded order
};

PositionPairs dwell_by_display_position(const std::vector<ParticipantDwell>& participants);

enum class SurveyPhase { pre, post };
enum class SurveyTopic { cost, carbon };
enum class UtilityItem { instrumental, hedonic, cognitive, want_not_know };

std::string_view to_string(SurveyPhase p);
std::string_view to_string(SurveyTopic t);
std::string_view to_string(UtilityItem i);

struct SurveyResponse {
  std::string participant_id;
  SurveyPhase phase{SurveyPhase::pre};
  SurveyTopic topic{SurveyTopic::cost};
  UtilityItem item{UtilityItem::instrumental};
  int score{0};  // Likert -3..3
};

inline constexpr std::string_view kSurveyHeader = "participant,phase,topic,item,score";

struct SurveyParseResult {
  std::vector<SurveyResponse> responses;
  std::size_t skipped_lines{0};
};

// Long-format CSV; throws Error(invalid_input) "missing header". Out-of-range or
// unknown values are skipped and counted.
SurveyParseResult parse_survey(std::string_view text);

struct SurveyItemResult {
  SurveyTopic topic{SurveyTopic::cost};
  UtilityItem item{UtilityItem::instrumental};
  std::size_t pairs{0};
  std::optional<stats::TestResult> test;
  std::string error;  // set when the test could not be computed
};

// One paired t-test (post - pre) per topic x item, over participants with both phases.
std::vector<SurveyItemResult> survey_paired_tests(const std::vector<SurveyResponse>& responses);

}  // namespace ecoprobe
