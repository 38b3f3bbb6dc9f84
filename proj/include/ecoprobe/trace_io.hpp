#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoprobe/domain.hpp"

namespace ecoprobe {

// Sensor trace CSV:
//   ts,kind,lat,lon,acc,speed,activity,confidence
//   1000,loc,37.0,-122.0,5.0,12.0,,
//   1000,motion,,,,,automotive,0.9
// Lines starting with '#' are comments. Newlines are '\n'; a trailing '\r' is tolerated.
inline constexpr std::string_view kTraceHeader = "ts,kind,lat,lon,acc,speed,activity,confidence";

struct TraceFile {
  std::vector<TraceRecord> records;  // non-decreasing ts, ties in input order
};

struct TraceParseResult {
  TraceFile trace;
  std::size_t skipped_lines{0};
};

// Throws Error(invalid_input) "missing header" / "no records".
TraceParseResult parse_trace(std::string_view text);

// Canonical serialization. `comment` lines are emitted before the header with a
// leading "# ". Doubles use the shortest round-trip representation.
std::string serialize_trace(const TraceFile& trace, const std::vector<std::string>& comments = {});

// Research interaction log CSV:
//   ts,event
//   1000,foreground
//   5000,tab:cost
inline constexpr std::string_view kInteractionLogHeader = "ts,event";

enum class UiEvent { foreground, background, tab_trips, tab_carbon, tab_cost, tab_info, tab_log };

std::string_view to_tag(UiEvent e);
std::optional<UiEvent> parse_ui_event_tag(std::string_view tag);

struct InteractionEvent {
  UnixMs ts{0};
  UiEvent event{UiEvent::foreground};

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

struct InteractionLogParseResult {
  std::vector<InteractionEvent> events;  // input order
  std::size_t skipped_lines{0};
};

// Throws Error(invalid_input) "missing header". Unknown tags and bad timestamps are
// skipped and counted.
InteractionLogParseResult parse_interaction_log(std::string_view text);

std::string serialize_interaction_log(const std::vector<InteractionEvent>& events);

namespace csv {

// Splits one line on ','. No quoting: values never contain commas.
std::vector<std::string_view> split(std::string_view line);

// Calls `fn(line, line_number)` for every line with the trailing '\r' removed.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, ++line_no);
  }
}

std::optional<std::int64_t> parse_int(std::string_view s);
std::optional<double> parse_double(std::string_view s);
// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace csv

}  // namespace ecoprobe
