#include "ecoprobe/trace_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace ecoprobe {

namespace csv {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (s.empty()) return std::nullopt;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace csv

namespace {

bool is_comment_or_blank(std::string_view line) {
  return line.empty() || line.front() == '#';
}

std::optional<TraceRecord> parse_trace_line(std::string_view line) {
  const auto f = csv::split(line);
  if (f.size() != 8) return std::nullopt;
  const auto ts = csv::parse_int(f[0]);
  if (!ts || *ts <= 0) return std::nullopt;

  if (f[1] == "loc") {
    if (!f[6].empty() || !f[7].empty()) return std::nullopt;
    const auto lat = csv::parse_double(f[2]);
    const auto lon = csv::parse_double(f[3]);
    const auto acc = csv::parse_double(f[4]);
    if (!lat || !lon || !acc || *acc < 0.0) return std::nullopt;
    GeoPoint p{*lat, *lon};
    if (!is_valid(p)) return std::nullopt;
    LocationSample loc{p, *acc, std::nullopt};
    if (!f[5].empty()) {
      const auto speed = csv::parse_double(f[5]);
      if (!speed || *speed < 0.0) return std::nullopt;
      loc.speed_mps = *speed;
    }
    return TraceRecord{*ts, loc};
  }

  if (f[1] == "motion") {
    if (!f[2].empty() || !f[3].empty() || !f[4].empty() || !f[5].empty()) return std::nullopt;
    const auto activity = parse_activity(f[6]);
    const auto conf = csv::parse_double(f[7]);
    if (!activity || !conf || *conf < 0.0 || *conf > 1.0) return std::nullopt;
    return TraceRecord{*ts, MotionSample{*activity, *conf}};
  }
  return std::nullopt;
}

}  // namespace

TraceParseResult parse_trace(std::string_view text) {
  TraceParseResult result;
  bool have_header = false;
  csv::for_each_line(text, [&](std::string_view line, std::size_t) {
    if (is_comment_or_blank(line)) return;
    if (!have_header) {
      if (line != kTraceHeader) invalid("missing header");
      have_header = true;
      return;
    }
    if (auto rec = parse_trace_line(line)) {
      result.trace.records.push_back(std::move(*rec));
    } else {
      ++result.skipped_lines;
    }
  });
  if (!have_header) invalid("missing header");
  if (result.trace.records.empty()) invalid("no records");
  std::stable_sort(result.trace.records.begin(), result.trace.records.end(),
                   [](const TraceRecord& a, const TraceRecord& b) { return a.ts < b.ts; });
  return result;
}

std::string serialize_trace(const TraceFile& trace, const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) {
    out += "# ";
    out += c;
    out += '\n';
  }
  out += kTraceHeader;
  out += '\n';
  for (const auto& r : trace.records) {
    if (r.is_location()) {
      const auto& loc = r.location();
      out += fmt::format("{},loc,{},{},{},{},,\n", r.ts, csv::format_double(loc.point.lat),
                         csv::format_double(loc.point.lon),
                         csv::format_double(loc.horizontal_accuracy_m),
                         loc.speed_mps ? csv::format_double(*loc.speed_mps) : std::string{});
    } else {
      const auto& m = r.motion();
      out += fmt::format("{},motion,,,,,{},{}\n", r.ts, to_string(m.activity),
                         csv::format_double(m.confidence));
    }
  }
  return out;
}

std::string_view to_tag(UiEvent e) {
  switch (e) {
    case UiEvent::foreground: return "foreground";
    case UiEvent::background: return "background";
    case UiEvent::tab_trips: return "tab:trips";
    case UiEvent::tab_carbon: return "tab:carbon";
    case UiEvent::tab_cost: return "tab:cost";
    case UiEvent::tab_info: return "tab:info";
    case UiEvent::tab_log: return "tab:log";
  }
  return "foreground";
}

std::optional<UiEvent> parse_ui_event_tag(std::string_view tag) {
  for (auto e : {UiEvent::foreground, UiEvent::background, UiEvent::tab_trips,
                 UiEvent::tab_carbon, UiEvent::tab_cost, UiEvent::tab_info, UiEvent::tab_log}) {
    if (to_tag(e) == tag) return e;
  }
  return std::nullopt;
}

InteractionLogParseResult parse_interaction_log(std::string_view text) {
  InteractionLogParseResult result;
  bool have_header = false;
  csv::for_each_line(text, [&](std::string_view line, std::size_t) {
    if (line.empty()) return;
    if (!have_header) {
      if (line != kInteractionLogHeader) invalid("missing header");
      have_header = true;
      return;
    }
    const auto f = csv::split(line);
    const auto ts = f.size() == 2 ? csv::parse_int(f[0]) : std::nullopt;
    const auto event = f.size() == 2 ? parse_ui_event_tag(f[1]) : std::nullopt;
    if (!ts || *ts <= 0 || !event) {
      ++result.skipped_lines;
      return;
    }
    result.events.push_back({*ts, *event});
  });
  if (!have_header) invalid("missing header");
  return result;
}

std::string serialize_interaction_log(const std::vector<InteractionEvent>& events) {
  std::string out{kInteractionLogHeader};
  out += '\n';
  for (const auto& e : events) {
    out += fmt::format("{},{}\n", e.ts, to_tag(e.event));
  }
  return out;
}

}  // namespace ecoprobe
