#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dhtwin/control.hpp"
#include "dhtwin/dispatch.hpp"
#include "dhtwin/forecast.hpp"
#include "dhtwin/lp.hpp"
#include "dhtwin/plant.hpp"
#include "dhtwin/timeseries.hpp"

namespace dhtwin {

enum class ControllerKind { RBC, MPC };
std::string_view controller_name(ControllerKind c) noexcept;
ControllerKind parse_controller(std::string_view s);

// Synthetic stand-ins for the measured inputs. Solar production for the
// reference field is a flat-plate collector
//   P = A_ref * (eta0*G - U*(T_coll - T_amb)) / 1000,  floored at 0,
// times (1 + forecast_noise*u), u uniform in [-1, 1].
struct SyntheticDataConfig {
  double load_peak = 100.0;         // kW
  double load_noise = 0.05;
  double irradiance_peak = 1000.0;  // W/m2, tilted plane
  double irradiance_noise = 0.1;
  double ambient_peak = 20.0;       // degC
  double ambient_noise = 0.05;
  double price_peak = 0.04;         // eur/kWh, variable (market) part
  double price_noise = 0.1;
  double price_fixed = 0.08;        // eur/kWh added to every step (fees, taxes)
  double collector_eta0 = 0.75;
  double collector_u = 3.5;         // W/(m2 K)
  double collector_temp = 50.0;     // degC
  double forecast_noise = 0.05;
  int training_days = 61;           // fit window ending where the period starts

  bool operator==(const SyntheticDataConfig&) const = default;
};

struct CsvDataConfig {
  std::string timeseries;  // timestamp,load_kW,solar_kW,price_eur_per_kWh
  std::string weather;     // timestamp,irradiance_W_per_m2,ambient_degC (optional)
  std::optional<SolarFitCoefficients> solar_fit;

  bool operator==(const CsvDataConfig&) const = default;
};

struct DataConfig {
  enum class Mode { synthetic, csv };
  Mode mode = Mode::synthetic;
  SyntheticDataConfig synthetic;
  CsvDataConfig csv;
  double solar_area_ref = 70.0;  // m2 the solar input series refer to

  bool operator==(const DataConfig&) const = default;
};

struct ScenarioConfig {
  std::string name = "A";
  PlantParams plant = PlantParams::defaults();
  std::optional<double> initial_energy;  // kWh, default 0.5*e_max
  ControllerKind controller = ControllerKind::RBC;
  RbcParams rbc;
  DispatchConfig dispatch;
  SolverOptions solver;
  double gas_price = 0.065;  // eur/kWh
  DataConfig data;
  Timestamp period_start = 0;
  Timestamp period_end = 0;
  double control_step = 0.5;  // h
  std::uint64_t seed = 7;
  bool perfect_forecast = false;
  std::string dump_dir;             // LP dumps go here when non-empty
  std::vector<long> dump_steps;

  std::size_t period_steps() const;
  double start_energy() const { return initial_energy.value_or(0.5 * plant.e_max); }
  // Throws ConfigInvalid.
  void validate() const;
};

/// Builtin sizings A, B and C over the 86-day benchmark window (2017-10-01 .. 12-26).
ScenarioConfig builtin_scenario(std::string_view name);
std::vector<ScenarioConfig> builtin_scenarios();

std::string config_to_json(const ScenarioConfig& config);
// Keys missing from the document keep their builtin_scenario("A") values.
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
void save_config(const ScenarioConfig& config, const std::filesystem::path& path);

std::string coefficients_to_json(const SolarFitCoefficients& c);
SolarFitCoefficients coefficients_from_json(const std::string& text);

}  // namespace dhtwin
