#include "ecoprobe/probe_store.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <utility>
#include <random>
#include <sstream>

#include <fcntl.h>
#include <unistd.h>

#include <fmt/format.h>
#include <json.hpp>

namespace ecoprobe {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json point_json(const GeoPoint& p) { return json::array({p.lat, p.lon}); }

GeoPoint point_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("point");
  return GeoPoint{j.at(0).get<double>(), j.at(1).get<double>()};
}

json payload_json(const JournalPayload& payload) {
  return std::visit(
      overloaded{
          [](const TripAdded& p) {
            return json{{"id", p.trip.id},
                        {"start_ts", p.trip.start_ts},
                        {"end_ts", p.trip.end_ts},
                        {"origin", point_json(p.trip.origin)},
                        {"destination", point_json(p.trip.destination)},
                        {"distance_miles", p.trip.distance_miles},
                        {"mode", to_string(p.trip.mode)}};
          },
          [](const TripDeleted& p) { return json{{"id", p.id}}; },
          [](const VehicleSet& p) {
            return json{{"category", to_string(p.vehicle.category)},
                        {"powertrain", to_string(p.vehicle.powertrain)}};
          },
          [](const EventRecorded& p) {
            return json{{"ts", p.event.ts}, {"event", to_tag(p.event.event)}};
          },
          [](const DisplayOrderSet& p) {
            return json{{"order", to_string(p.order)}, {"seed", p.seed}};
          },
      },
      payload);
}

std::optional<JournalPayload> payload_from(JournalOp op, const json& j) {
  switch (op) {
    case JournalOp::trip_added: {
      Trip t;
      t.id = j.at("id").get<std::string>();
      t.start_ts = j.at("start_ts").get<UnixMs>();
      t.end_ts = j.at("end_ts").get<UnixMs>();
      t.origin = point_from(j.at("origin"));
      t.destination = point_from(j.at("destination"));
      t.distance_miles = j.at("distance_miles").get<double>();
      const auto mode = parse_travel_mode(j.at("mode").get<std::string>());
      if (!mode) return std::nullopt;
      t.mode = *mode;
      return TripAdded{std::move(t)};
    }
    case JournalOp::trip_deleted: return TripDeleted{j.at("id").get<std::string>()};
    case JournalOp::vehicle_set: {
      const auto c = parse_vehicle_category(j.at("category").get<std::string>());
      const auto p = parse_powertrain(j.at("powertrain").get<std::string>());
      if (!c || !p) return std::nullopt;
      return VehicleSet{{*c, *p}};
    }
    case JournalOp::event_recorded: {
      const auto e = parse_ui_event_tag(j.at("event").get<std::string>());
      if (!e) return std::nullopt;
      return EventRecorded{{j.at("ts").get<UnixMs>(), *e}};
    }
    case JournalOp::display_order_set: {
      const auto o = parse_display_order(j.at("order").get<std::string>());
      if (!o) return std::nullopt;
      return DisplayOrderSet{*o, j.at("seed").get<std::uint64_t>()};
    }
  }
  return std::nullopt;
}

void write_all(int fd, std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      fail(ErrorCode::internal, fmt::format("journal write failed: {}", std::strerror(errno)));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string_view to_string(JournalOp op) {
  switch (op) {
    case JournalOp::trip_added: return "trip_added";
    case JournalOp::trip_deleted: return "trip_deleted";
    case JournalOp::vehicle_set: return "vehicle_set";
    case JournalOp::event_recorded: return "event_recorded";
    case JournalOp::display_order_set: return "display_order_set";
  }
  return "trip_added";
}

std::optional<JournalOp> parse_journal_op(std::string_view s) {
  for (auto op : {JournalOp::trip_added, JournalOp::trip_deleted, JournalOp::vehicle_set,
                  JournalOp::event_recorded, JournalOp::display_order_set}) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

JournalOp JournalEntry::op() const { return static_cast<JournalOp>(payload.index()); }

std::string format_journal_line(const JournalEntry& e) {
  return fmt::format("{},{},{},{}\n", e.seq, e.ts, to_string(e.op()), payload_json(e.payload).dump());
}

std::optional<JournalEntry> parse_journal_line(std::string_view line) {
  std::string_view fields[3];
  for (auto& f : fields) {
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) return std::nullopt;
    f = line.substr(0, comma);
    line.remove_prefix(comma + 1);
  }
  const auto seq = csv::parse_int(fields[0]);
  const auto ts = csv::parse_int(fields[1]);
  const auto op = parse_journal_op(fields[2]);
  if (!seq || *seq <= 0 || !ts || !op) return std::nullopt;
  try {
    const auto j = json::parse(line);
    if (!j.is_object()) return std::nullopt;
    auto payload = payload_from(*op, j);
    if (!payload) return std::nullopt;
    return JournalEntry{static_cast<std::uint64_t>(*seq), *ts, std::move(*payload)};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

const Trip* ProbeState::find_trip(std::string_view id) const {
  const auto it = trip_index.find(std::string(id));
  return it == trip_index.end() ? nullptr : &trips[it->second];
}

std::vector<Trip> ProbeState::live_trips() const {
  std::vector<Trip> out;
  for (const auto& t : trips) {
    if (!t.deleted) out.push_back(t);
  }
  return out;
}

void ProbeState::check(const JournalEntry& e) const {
  if (e.seq <= last_seq) invalid(fmt::format("journal seq {} not after {}", e.seq, last_seq));
  std::visit(overloaded{
                 [&](const TripAdded& p) {
                   if (p.trip.id.empty()) invalid("trip id must not be empty");
                   if (p.trip.deleted) invalid("cannot add a deleted trip");
                   if (find_trip(p.trip.id)) fail(ErrorCode::conflict, fmt::format("trip {} already exists", p.trip.id));
                   validate(p.trip);
                 },
                 [&](const TripDeleted& p) {
                   const Trip* t = find_trip(p.id);
                   if (!t) fail(ErrorCode::not_found, fmt::format("trip {} not found", p.id));
                   if (t->deleted) fail(ErrorCode::conflict, fmt::format("trip {} already deleted", p.id));
                 },
                 [](const VehicleSet&) {},
                 [](const EventRecorded& p) {
                   if (p.event.ts <= 0) invalid("event timestamp must be positive");
                 },
                 [](const DisplayOrderSet&) {},
             },
             e.payload);
}

void ProbeState::apply(const JournalEntry& e) {
  std::visit(overloaded{
                 [&](const TripAdded& p) {
                   trip_index[p.trip.id] = trips.size();
                   trips.push_back(p.trip);
                 },
                 [&](const TripDeleted& p) { trips[trip_index.at(p.id)].deleted = true; },
                 [&](const VehicleSet& p) { vehicle = p.vehicle; },
                 [&](const EventRecorded& p) { events.push_back(p.event); },
                 [&](const DisplayOrderSet& p) { display_order = p.order; },
             },
             e.payload);
  last_seq = e.seq;
}

ReplayResult replay_journal(std::string_view bytes) {
  ReplayResult r;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) {
      r.truncation = fmt::format("torn final line at byte {}", pos);
      break;
    }
    const auto entry = parse_journal_line(bytes.substr(pos, nl - pos));
    if (!entry) {
      r.truncation = fmt::format("malformed entry at byte {}", pos);
      break;
    }
    try {
      r.state.check(*entry);
    } catch (const Error& e) {
      r.truncation = fmt::format("invalid entry at byte {}: {}", pos, e.what());
      break;
    }
    r.state.apply(*entry);
    ++r.entries;
    pos = nl + 1;
  }
  r.valid_bytes = pos;
  r.truncated_bytes = bytes.size() - pos;
  return r;
}

ReplayResult replay_journal_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path)) return ReplayResult{};
    invalid(fmt::format("cannot read journal {}", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return replay_journal(ss.str());
}

ProbeStore::ProbeStore(std::filesystem::path path, int fd, ProbeState state, StoreOptions options)
    : path_(std::move(path)),
      fd_(fd),
      options_(options),
      state_(std::move(state)),
      mutex_(std::make_unique<std::shared_mutex>()) {}

ProbeStore::ProbeStore(ProbeStore&& o) noexcept
    : path_(std::move(o.path_)),
      fd_(std::exchange(o.fd_, -1)),
      options_(o.options_),
      state_(std::move(o.state_)),
      truncation_(std::move(o.truncation_)),
      mutex_(std::move(o.mutex_)) {}

ProbeStore& ProbeStore::operator=(ProbeStore&& o) noexcept {
  if (this != &o) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(o.path_);
    fd_ = std::exchange(o.fd_, -1);
    options_ = o.options_;
    state_ = std::move(o.state_);
    truncation_ = std::move(o.truncation_);
    mutex_ = std::move(o.mutex_);
  }
  return *this;
}

ProbeStore::~ProbeStore() {
  if (fd_ >= 0) ::close(fd_);
}

ProbeStore ProbeStore::open(const std::filesystem::path& path, StoreOptions options) {
  auto replayed = replay_journal_file(path);
  if (replayed.truncated_bytes > 0) {
    std::filesystem::resize_file(path, replayed.valid_bytes);
  }
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0600);
  if (fd < 0) {
    invalid(fmt::format("cannot open journal {}: {}", path.string(), std::strerror(errno)));
  }
  ProbeStore store(path, fd, std::move(replayed.state), options);
  store.truncation_ = replayed.truncation;
  if (!store.state_.display_order) {
    const std::uint64_t seed = options.order_seed ? *options.order_seed
                                                  : (std::uint64_t{std::random_device{}()} << 32) ^
                                                        std::random_device{}();
    std::mt19937_64 rng(seed);
    const auto order = (rng() & 1U) ? DisplayOrder::cost_first : DisplayOrder::carbon_first;
    store.append(0, DisplayOrderSet{order, seed});
  }
  return store;
}

std::uint64_t ProbeStore::append_locked(UnixMs ts, JournalPayload payload) {
  if (fd_ < 0) fail(ErrorCode::internal, "journal is closed after a failed write");
  JournalEntry e{state_.last_seq + 1, ts, std::move(payload)};
  state_.check(e);
  const auto line = format_journal_line(e);
  const auto before = ::lseek(fd_, 0, SEEK_END);
  try {
    write_all(fd_, line);
    if (options_.fsync && ::fsync(fd_) != 0) {
      fail(ErrorCode::internal, fmt::format("journal fsync failed: {}", std::strerror(errno)));
    }
  } catch (...) {
    if (before < 0 || ::ftruncate(fd_, before) != 0) {
      // A torn line may remain; refuse further appends so nothing lands after it.
      ::close(fd_);
      fd_ = -1;
    }
    throw;
  }
  state_.apply(e);
  return e.seq;
}

std::uint64_t ProbeStore::append(UnixMs ts, JournalPayload payload) {
  std::unique_lock lock(*mutex_);
  return append_locked(ts, std::move(payload));
}

std::string ProbeStore::add_trip(UnixMs ts, Trip trip) {
  std::unique_lock lock(*mutex_);
  trip.id = fmt::format("trip-{}", state_.last_seq + 1);
  trip.deleted = false;
  const std::string id = trip.id;
  append_locked(ts, TripAdded{std::move(trip)});
  return id;
}

void ProbeStore::delete_trip(UnixMs ts, const std::string& id) { append(ts, TripDeleted{id}); }

void ProbeStore::set_vehicle(UnixMs ts, VehicleChoice v) { append(ts, VehicleSet{v}); }

void ProbeStore::record_events(UnixMs ts, const std::vector<InteractionEvent>& events) {
  std::unique_lock lock(*mutex_);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].ts <= 0) invalid(fmt::format("event {}: timestamp must be positive", i));
  }
  for (const auto& e : events) append_locked(ts, EventRecorded{e});
}

ProbeState ProbeStore::snapshot() const {
  std::shared_lock lock(*mutex_);
  return state_;
}

}  // namespace ecoprobe
