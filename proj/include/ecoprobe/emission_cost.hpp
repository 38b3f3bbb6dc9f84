#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ecoprobe/domain.hpp"

namespace ecoprobe {

enum class VehicleCategory {
  small_car,
  midsize_car,
  large_car,
  suv,
  minivan,
  truck,
  station_wagon,
  sports_car,
};

enum class Powertrain { ICE, HEV };

std::string_view to_string(VehicleCategory c);
std::optional<VehicleCategory> parse_vehicle_category(std::string_view s);
std::string_view to_string(Powertrain p);
std::optional<Powertrain> parse_powertrain(std::string_view s);

struct VehicleProfile {
  VehicleCategory category{VehicleCategory::midsize_car};
  Powertrain powertrain{Powertrain::ICE};
  double mpg_combined{0.0};
  std::optional<double> co2_g_per_mile;  // overrides the per-gallon constant when set

  void validate() const;
};

// Read-only after load. CSV: category,powertrain,mpg,co2_g_per_mile (last column may be empty).
class VehicleCatalog {
 public:
  static VehicleCatalog parse(std::string_view csv_text);
  static VehicleCatalog load(const std::string& path);

  const std::vector<VehicleProfile>& profiles() const { return profiles_; }
  const VehicleProfile* find(VehicleCategory c, Powertrain p) const;
  // Throws Error(invalid_input) when the pair is not in the catalog.
  const VehicleProfile& at(VehicleCategory c, Powertrain p) const;

 private:
  std::vector<VehicleProfile> profiles_;
};

struct PriceConfig {
  double fuel_usd_per_gal{3.85};
  double co2_kg_per_gal{8.887};

  void validate() const;
};

// Eco-driving savings tiers: 17.5% up to 5 mi, 3.9% from 15 mi, linear in between.
inline constexpr double kEcoFractionCity = 0.175;
inline constexpr double kEcoFractionHighway = 0.039;
inline constexpr double kEcoCityMaxMiles = 5.0;
inline constexpr double kEcoHighwayMinMiles = 15.0;

double eco_fraction(double distance_miles);

double trip_gallons(const Trip& trip, const VehicleProfile& vehicle);

struct TripCostSummary {
  std::string trip_id;
  UnixMs start_ts{0};
  double distance_miles{0.0};
  double gallons{0.0};
  Money cost;
  Emission co2;
  double eco_fraction{kEcoFractionCity};
  Money potential_cost_saving;
  Emission potential_co2_saving;
};

TripCostSummary trip_summary(const Trip& trip, const VehicleProfile& vehicle,
                             const PriceConfig& prices);

struct Totals {
  Money cost;
  Emission co2;
  Money potential_cost_saving;
  Emission potential_co2_saving;
  std::size_t trip_count{0};

  Totals& operator+=(const TripCostSummary& s);
  Totals& operator+=(const Totals& o);
  friend bool operator==(const Totals&, const Totals&) = default;
};

Totals aggregate(const std::vector<TripCostSummary>& summaries, TimeRange range = TimeRange::all());

}  // namespace ecoprobe
