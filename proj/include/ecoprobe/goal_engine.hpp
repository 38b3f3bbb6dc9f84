#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoprobe/domain.hpp"
#include "ecoprobe/emission_cost.hpp"

namespace ecoprobe {

inline constexpr std::string_view kExceededGoalMessage =
    "You drove more than last period, try again when the current period resets.";

inline constexpr int kDefaultWindowDays = 3;

struct GoalTotals {
  Money cost;
  Emission co2;

  friend bool operator==(const GoalTotals&, const GoalTotals&) = default;
};

struct GoalWindow {
  std::size_t index{0};
  UnixMs start_ts{0};
  UnixMs end_ts{0};  // exclusive
  GoalTotals totals;
};

enum class GoalMetric { cost, co2 };
enum class GoalKind { no_goal_yet, on_track, exceeded };

std::string_view to_string(GoalMetric m);
std::string_view to_string(GoalKind k);

struct GoalStatus {
  GoalKind kind{GoalKind::no_goal_yet};
  std::optional<GoalTotals> goal;
  GoalTotals current;
  std::optional<std::string> message;
};

// Midnight at the start of the day containing `ts`. With `utc_offset_minutes` unset the
// process time zone is used.
UnixMs local_midnight(UnixMs ts, std::optional<int> utc_offset_minutes = std::nullopt);

// Consecutive non-sliding windows [start + k*L, start + (k+1)*L). Every summary lands in
// the window holding its start_ts; windows run through the one containing
// max(now_ts, latest trip). Throws Error(invalid_input) for a trip before study start.
std::vector<GoalWindow> assign_windows(const std::vector<TripCostSummary>& summaries,
                                       UnixMs study_start_ts, UnixMs now_ts,
                                       int window_len_days = kDefaultWindowDays);

// The goal is the previous window's total; the current window's running total exceeds
// it only when strictly greater.
GoalStatus goal_status(const std::vector<GoalWindow>& windows, GoalMetric metric, UnixMs now_ts);

}  // namespace ecoprobe
