#include "ecoprobe/goal_engine.hpp"

#include <algorithm>
#include <ctime>

#include <fmt/format.h>

namespace ecoprobe {

namespace {

UnixMs floor_div(UnixMs a, UnixMs b) {
  UnixMs q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::string_view to_string(GoalMetric m) { return m == GoalMetric::cost ? "cost" : "co2"; }

std::string_view to_string(GoalKind k) {
  switch (k) {
    case GoalKind::no_goal_yet: return "no_goal_yet";
    case GoalKind::on_track: return "on_track";
    case GoalKind::exceeded: return "exceeded";
  }
  return "no_goal_yet";
}

UnixMs local_midnight(UnixMs ts, std::optional<int> utc_offset_minutes) {
  if (utc_offset_minutes) {
    const UnixMs offset = static_cast<UnixMs>(*utc_offset_minutes) * 60'000;
    return floor_div(ts + offset, kMsPerDay) * kMsPerDay - offset;
  }
  const std::time_t secs = static_cast<std::time_t>(floor_div(ts, 1000));
  std::tm local{};
  localtime_r(&secs, &local);
  local.tm_hour = 0;
  local.tm_min = 0;
  local.tm_sec = 0;
  local.tm_isdst = -1;
  return static_cast<UnixMs>(std::mktime(&local)) * 1000;
}

std::vector<GoalWindow> assign_windows(const std::vector<TripCostSummary>& summaries,
                                       UnixMs study_start_ts, UnixMs now_ts,
                                       int window_len_days) {
  if (window_len_days < 1) invalid("window length must be at least one day");
  const UnixMs len = static_cast<UnixMs>(window_len_days) * kMsPerDay;

  UnixMs horizon = std::max(now_ts, study_start_ts);
  for (const auto& s : summaries) {
    if (s.start_ts < study_start_ts) {
      invalid(fmt::format("trip {} starts before study start", s.trip_id));
    }
    horizon = std::max(horizon, s.start_ts);
  }

  const auto count = static_cast<std::size_t>((horizon - study_start_ts) / len) + 1;
  std::vector<GoalWindow> windows(count);
  for (std::size_t k = 0; k < count; ++k) {
    windows[k].index = k;
    windows[k].start_ts = study_start_ts + static_cast<UnixMs>(k) * len;
    windows[k].end_ts = windows[k].start_ts + len;
  }
  for (const auto& s : summaries) {
    auto& w = windows[static_cast<std::size_t>((s.start_ts - study_start_ts) / len)];
    w.totals.cost += s.cost;
    w.totals.co2 += s.co2;
  }
  return windows;
}

GoalStatus goal_status(const std::vector<GoalWindow>& windows, GoalMetric metric, UnixMs now_ts) {
  if (windows.empty()) invalid("no goal windows");
  const UnixMs start = windows.front().start_ts;
  if (now_ts < start) invalid("now is before study start");
  const UnixMs len = windows.front().end_ts - windows.front().start_ts;
  const auto k = static_cast<std::size_t>((now_ts - start) / len);

  auto totals_at = [&](std::size_t i) { return i < windows.size() ? windows[i].totals : GoalTotals{}; };

  GoalStatus st;
  st.current = totals_at(k);
  if (k == 0) {
    st.kind = GoalKind::no_goal_yet;
    return st;
  }
  st.goal = totals_at(k - 1);
  const bool exceeded = metric == GoalMetric::cost ? st.current.cost > st.goal->cost
                                                   : st.current.co2 > st.goal->co2;
  st.kind = exceeded ? GoalKind::exceeded : GoalKind::on_track;
  if (exceeded) st.message = std::string(kExceededGoalMessage);
  return st;
}

}  // namespace ecoprobe
