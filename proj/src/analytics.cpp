#include "ecoprobe/analytics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace ecoprobe {

std::int64_t DwellReport::total_tab_ms() const {
  return std::accumulate(tab_ms.begin(), tab_ms.end(), std::int64_t{0});
}

DwellReport compute_dwell(const std::vector<InteractionEvent>& events) {
  DwellReport report;
  bool open = false;
  AppTab focus = AppTab::trips;
  UnixMs focus_start = 0;
  UnixMs session_start = 0;

  auto accrue = [&](UnixMs ts) {
    report.tab_ms[static_cast<std::size_t>(focus)] += std::max<UnixMs>(0, ts - focus_start);
    focus_start = std::max(focus_start, ts);
  };
  auto close = [&](UnixMs ts) {
    accrue(ts);
    report.total_foreground_ms += std::max<UnixMs>(0, ts - session_start);
    open = false;
  };

  for (const auto& e : events) {
    switch (e.event) {
      case UiEvent::foreground:
        if (open) close(e.ts);
        open = true;
        ++report.session_count;
        focus = AppTab::trips;
        focus_start = session_start = e.ts;
        break;
      case UiEvent::background:
        if (open) close(e.ts);
        break;
      case UiEvent::tab_trips:
      case UiEvent::tab_carbon:
      case UiEvent::tab_cost:
      case UiEvent::tab_info:
      case UiEvent::tab_log: {
        if (!open) break;
        accrue(e.ts);
        static constexpr AppTab kTabOf[] = {AppTab::trips, AppTab::carbon, AppTab::cost,
                                            AppTab::info, AppTab::log};
        focus = kTabOf[static_cast<int>(e.event) - static_cast<int>(UiEvent::tab_trips)];
        break;
      }
    }
  }
  if (open && !events.empty()) close(events.back().ts);
  return report;
}

PositionPairs dwell_by_display_position(const std::vector<ParticipantDwell>& participants) {
  PositionPairs out;
  for (const auto& p : participants) {
    if (!p.order) {
      ++out.excluded;
      continue;
    }
    const auto seq = tab_sequence(*p.order);
    out.participants.push_back(p.participant);
    out.second_ms.push_back(static_cast<double>(p.report.dwell(seq[1])));
    out.third_ms.push_back(static_cast<double>(p.report.dwell(seq[2])));
  }
  return out;
}

std::string_view to_string(SurveyPhase p) { return p == SurveyPhase::pre ? "pre" : "post"; }

std::string_view to_string(SurveyTopic t) { return t == SurveyTopic::cost ? "cost" : "carbon"; }

std::string_view to_string(UtilityItem i) {
  switch (i) {
    case UtilityItem::instrumental: return "instrumental";
    case UtilityItem::hedonic: return "hedonic";
    case UtilityItem::cognitive: return "cognitive";
    case UtilityItem::want_not_know: return "want_not_know";
  }
  return "instrumental";
}

namespace {

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const E (&values)[N]) {
  for (auto v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

constexpr SurveyPhase kPhases[] = {SurveyPhase::pre, SurveyPhase::post};
constexpr SurveyTopic kTopics[] = {SurveyTopic::cost, SurveyTopic::carbon};
constexpr UtilityItem kItems[] = {UtilityItem::instrumental, UtilityItem::hedonic,
                                  UtilityItem::cognitive, UtilityItem::want_not_know};

}  // namespace

SurveyParseResult parse_survey(std::string_view text) {
  SurveyParseResult result;
  bool have_header = false;
  csv::for_each_line(text, [&](std::string_view line, std::size_t) {
    if (line.empty()) return;
    if (!have_header) {
      if (line != kSurveyHeader) invalid("missing header");
      have_header = true;
      return;
    }
    const auto f = csv::split(line);
    if (f.size() != 5 || f[0].empty()) {
      ++result.skipped_lines;
      return;
    }
    const auto phase = parse_enum(f[1], kPhases);
    const auto topic = parse_enum(f[2], kTopics);
    const auto item = parse_enum(f[3], kItems);
    const auto score = csv::parse_int(f[4]);
    if (!phase || !topic || !item || !score || *score < -3 || *score > 3) {
      ++result.skipped_lines;
      return;
    }
    result.responses.push_back(
        {std::string(f[0]), *phase, *topic, *item, static_cast<int>(*score)});
  });
  if (!have_header) invalid("missing header");
  return result;
}

std::vector<SurveyItemResult> survey_paired_tests(const std::vector<SurveyResponse>& responses) {
  // (topic, item) -> participant -> [pre, post]; a later duplicate overwrites.
  using Key = std::tuple<SurveyTopic, UtilityItem>;
  std::map<Key, std::map<std::string, std::array<std::optional<int>, 2>>> grouped;
  for (const auto& r : responses) {
    grouped[{r.topic, r.item}][r.participant_id][static_cast<std::size_t>(r.phase)] = r.score;
  }

  std::vector<SurveyItemResult> out;
  for (auto topic : kTopics) {
    for (auto item : kItems) {
      SurveyItemResult res{topic, item, 0, std::nullopt, {}};
      std::vector<double> pre;
      std::vector<double> post;
      if (auto it = grouped.find({topic, item}); it != grouped.end()) {
        for (const auto& [participant, scores] : it->second) {
          if (scores[0] && scores[1]) {
            pre.push_back(*scores[0]);
            post.push_back(*scores[1]);
          }
        }
      }
      res.pairs = pre.size();
      try {
        res.test = stats::paired_t_test(pre, post);
      } catch (const Error& e) {
        res.error = e.what();
      }
      out.push_back(std::move(res));
    }
  }
  return out;
}

}  // namespace ecoprobe
