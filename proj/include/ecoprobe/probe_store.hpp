#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecoprobe/domain.hpp"
#include "ecoprobe/emission_cost.hpp"
#include "ecoprobe/trace_io.hpp"

namespace ecoprobe {

// Journal line: seq,ts,op,<payload as compact JSON>\n
// A line counts only once its terminating newline is on disk.

enum class JournalOp { trip_added, trip_deleted, vehicle_set, event_recorded, display_order_set };

std::string_view to_string(JournalOp op);
std::optional<JournalOp> parse_journal_op(std::string_view s);

struct VehicleChoice {
  VehicleCategory category{VehicleCategory::midsize_car};
  Powertrain powertrain{Powertrain::ICE};

  friend bool operator==(const VehicleChoice&, const VehicleChoice&) = default;
};

struct TripAdded { Trip trip; };
struct TripDeleted { std::string id; };
struct VehicleSet { VehicleChoice vehicle; };
struct EventRecorded { InteractionEvent event; };
struct DisplayOrderSet {
  DisplayOrder order{DisplayOrder::carbon_first};
  std::uint64_t seed{0};
};

using JournalPayload = std::variant<TripAdded, TripDeleted, VehicleSet, EventRecorded, DisplayOrderSet>;

struct JournalEntry {
  std::uint64_t seq{0};
  UnixMs ts{0};
  JournalPayload payload;

  JournalOp op() const;
};

std::string format_journal_line(const JournalEntry& e);
// nullopt when the line is not a well-formed entry.
std::optional<JournalEntry> parse_journal_line(std::string_view line);

inline const VehicleChoice kDefaultVehicle{VehicleCategory::midsize_car, Powertrain::ICE};

struct ProbeState {
  std::vector<Trip> trips;  // insertion order, deleted ones flagged
  std::map<std::string, std::size_t> trip_index;
  std::optional<VehicleChoice> vehicle;
  std::vector<InteractionEvent> events;
  std::optional<DisplayOrder> display_order;
  std::uint64_t last_seq{0};

  const Trip* find_trip(std::string_view id) const;
  std::vector<Trip> live_trips() const;
  VehicleChoice vehicle_or_default() const { return vehicle.value_or(kDefaultVehicle); }

  // Throws Error(not_found | conflict | invalid_input) when `e` does not apply.
  void check(const JournalEntry& e) const;
  void apply(const JournalEntry& e);
};

struct ReplayResult {
  ProbeState state;
  std::size_t entries{0};
  std::uint64_t valid_bytes{0};      // length of the longest valid prefix
  std::uint64_t truncated_bytes{0};  // bytes after it
  std::optional<std::string> truncation;  // reason, when anything was dropped
};

// Folds the longest valid prefix of a journal's bytes.
ReplayResult replay_journal(std::string_view bytes);
ReplayResult replay_journal_file(const std::filesystem::path& path);

struct StoreOptions {
  bool fsync{true};
  // Seed for the one-time carbon/cost order draw; random_device when unset.
  std::optional<std::uint64_t> order_seed;
};

// Single-writer, multi-reader journal-backed store. Mutations are validated against the
// current state, appended durably, then applied. Readers get consistent snapshots.
class ProbeStore {
 public:
  // Opens or creates the journal, drops a torn tail, and journals the display order on
  // first use.
  static ProbeStore open(const std::filesystem::path& path, StoreOptions options = {});

  ProbeStore(ProbeStore&&) noexcept;
  ProbeStore& operator=(ProbeStore&&) noexcept;
  ProbeStore(const ProbeStore&) = delete;
  ProbeStore& operator=(const ProbeStore&) = delete;
  ~ProbeStore();

  // Assigns seq, validates, appends and applies. Returns the seq.
  std::uint64_t append(UnixMs ts, JournalPayload payload);

  // Assigns an id of the form "trip-<seq>".
  std::string add_trip(UnixMs ts, Trip trip);
  void delete_trip(UnixMs ts, const std::string& id);
  void set_vehicle(UnixMs ts, VehicleChoice v);
  void record_events(UnixMs ts, const std::vector<InteractionEvent>& events);

  ProbeState snapshot() const;
  const std::filesystem::path& path() const { return path_; }
  // Report of what was dropped when the journal was opened.
  const std::optional<std::string>& recovered_truncation() const { return truncation_; }

 private:
  ProbeStore(std::filesystem::path path, int fd, ProbeState state, StoreOptions options);
  std::uint64_t append_locked(UnixMs ts, JournalPayload payload);

  std::filesystem::path path_;
  int fd_{-1};
  StoreOptions options_;
  ProbeState state_;
  std::optional<std::string> truncation_;
  mutable std::unique_ptr<std::shared_mutex> mutex_;
};

}  // namespace ecoprobe
