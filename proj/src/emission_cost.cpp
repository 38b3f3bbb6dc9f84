#include "ecoprobe/emission_cost.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "ecoprobe/trace_io.hpp"

namespace ecoprobe {

namespace {

constexpr VehicleCategory kCategories[] = {
    VehicleCategory::small_car, VehicleCategory::midsize_car,  VehicleCategory::large_car,
    VehicleCategory::suv,       VehicleCategory::minivan,      VehicleCategory::truck,
    VehicleCategory::station_wagon, VehicleCategory::sports_car,
};

constexpr std::string_view kCatalogHeader = "category,powertrain,mpg,co2_g_per_mile";

}  // namespace

std::string_view to_string(VehicleCategory c) {
  switch (c) {
    case VehicleCategory::small_car: return "small_car";
    case VehicleCategory::midsize_car: return "midsize_car";
    case VehicleCategory::large_car: return "large_car";
    case VehicleCategory::suv: return "suv";
    case VehicleCategory::minivan: return "minivan";
    case VehicleCategory::truck: return "truck";
    case VehicleCategory::station_wagon: return "station_wagon";
    case VehicleCategory::sports_car: return "sports_car";
  }
  return "midsize_car";
}

std::optional<VehicleCategory> parse_vehicle_category(std::string_view s) {
  for (auto c : kCategories) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(Powertrain p) { return p == Powertrain::ICE ? "ICE" : "HEV"; }

std::optional<Powertrain> parse_powertrain(std::string_view s) {
  if (s == "ICE") return Powertrain::ICE;
  if (s == "HEV") return Powertrain::HEV;
  return std::nullopt;
}

void VehicleProfile::validate() const {
  if (!std::isfinite(mpg_combined) || mpg_combined <= 0.0) {
    invalid(fmt::format("{}/{}: mpg must be positive", to_string(category), to_string(powertrain)));
  }
  if (co2_g_per_mile && (!std::isfinite(*co2_g_per_mile) || *co2_g_per_mile <= 0.0)) {
    invalid(fmt::format("{}/{}: co2_g_per_mile must be positive", to_string(category),
                        to_string(powertrain)));
  }
}

VehicleCatalog VehicleCatalog::parse(std::string_view csv_text) {
  VehicleCatalog cat;
  bool have_header = false;
  csv::for_each_line(csv_text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    if (!have_header) {
      if (line != kCatalogHeader) invalid("vehicle catalog: missing header");
      have_header = true;
      return;
    }
    const auto f = csv::split(line);
    if (f.size() != 4) invalid(fmt::format("vehicle catalog line {}: expected 4 fields", line_no));
    const auto category = parse_vehicle_category(f[0]);
    const auto powertrain = parse_powertrain(f[1]);
    const auto mpg = csv::parse_double(f[2]);
    if (!category || !powertrain || !mpg) {
      invalid(fmt::format("vehicle catalog line {}: malformed", line_no));
    }
    VehicleProfile v{*category, *powertrain, *mpg, std::nullopt};
    if (!f[3].empty()) {
      const auto g = csv::parse_double(f[3]);
      if (!g) invalid(fmt::format("vehicle catalog line {}: malformed co2_g_per_mile", line_no));
      v.co2_g_per_mile = *g;
    }
    v.validate();
    if (cat.find(v.category, v.powertrain)) {
      invalid(fmt::format("vehicle catalog line {}: duplicate {}/{}", line_no, f[0], f[1]));
    }
    cat.profiles_.push_back(v);
  });
  if (!have_header) invalid("vehicle catalog: missing header");
  if (cat.profiles_.empty()) invalid("vehicle catalog: no vehicles");
  return cat;
}

VehicleCatalog VehicleCatalog::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid(fmt::format("cannot read vehicle catalog {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const VehicleProfile* VehicleCatalog::find(VehicleCategory c, Powertrain p) const {
  for (const auto& v : profiles_) {
    if (v.category == c && v.powertrain == p) return &v;
  }
  return nullptr;
}

const VehicleProfile& VehicleCatalog::at(VehicleCategory c, Powertrain p) const {
  if (const auto* v = find(c, p)) return *v;
  invalid(fmt::format("unknown vehicle {}/{}", to_string(c), to_string(p)));
}

void PriceConfig::validate() const {
  if (!std::isfinite(fuel_usd_per_gal) || fuel_usd_per_gal <= 0.0) {
    invalid("fuel price must be positive");
  }
  if (!std::isfinite(co2_kg_per_gal) || co2_kg_per_gal <= 0.0) {
    invalid("co2 per gallon must be positive");
  }
}

double eco_fraction(double distance_miles) {
  if (!std::isfinite(distance_miles) || distance_miles < 0.0) {
    invalid(fmt::format("distance must be finite and non-negative, got {}", distance_miles));
  }
  if (distance_miles <= kEcoCityMaxMiles) return kEcoFractionCity;
  if (distance_miles >= kEcoHighwayMinMiles) return kEcoFractionHighway;
  const double t = (distance_miles - kEcoCityMaxMiles) / (kEcoHighwayMinMiles - kEcoCityMaxMiles);
  return kEcoFractionCity - t * (kEcoFractionCity - kEcoFractionHighway);
}

double trip_gallons(const Trip& trip, const VehicleProfile& vehicle) {
  if (trip.mode != TravelMode::automotive) {
    invalid(fmt::format("trip {}: not a fuel trip ({})", trip.id, to_string(trip.mode)));
  }
  vehicle.validate();
  if (!std::isfinite(trip.distance_miles) || trip.distance_miles < 0.0) {
    invalid(fmt::format("trip {}: invalid distance", trip.id));
  }
  return trip.distance_miles / vehicle.mpg_combined;
}

TripCostSummary trip_summary(const Trip& trip, const VehicleProfile& vehicle,
                             const PriceConfig& prices) {
  prices.validate();
  const double gallons = trip_gallons(trip, vehicle);
  const double cost_usd = gallons * prices.fuel_usd_per_gal;
  const double co2_kg = vehicle.co2_g_per_mile ? trip.distance_miles * *vehicle.co2_g_per_mile / 1000.0
                                               : gallons * prices.co2_kg_per_gal;
  const double eco = eco_fraction(trip.distance_miles);

  TripCostSummary s;
  s.trip_id = trip.id;
  s.start_ts = trip.start_ts;
  s.distance_miles = trip.distance_miles;
  s.gallons = gallons;
  s.cost = Money::from_usd(cost_usd);
  s.co2 = Emission::from_kg(co2_kg);
  s.eco_fraction = eco;
  s.potential_cost_saving = Money::from_usd(cost_usd * eco);
  s.potential_co2_saving = Emission::from_kg(co2_kg * eco);
  return s;
}

Totals& Totals::operator+=(const TripCostSummary& s) {
  cost += s.cost;
  co2 += s.co2;
  potential_cost_saving += s.potential_cost_saving;
  potential_co2_saving += s.potential_co2_saving;
  ++trip_count;
  return *this;
}

Totals& Totals::operator+=(const Totals& o) {
  cost += o.cost;
  co2 += o.co2;
  potential_cost_saving += o.potential_cost_saving;
  potential_co2_saving += o.potential_co2_saving;
  trip_count += o.trip_count;
  return *this;
}

Totals aggregate(const std::vector<TripCostSummary>& summaries, TimeRange range) {
  Totals t;
  for (const auto& s : summaries) {
    if (range.contains(s.start_ts)) t += s;
  }
  return t;
}

}  // namespace ecoprobe
