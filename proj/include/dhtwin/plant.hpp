#pragma once

#include <optional>

namespace dhtwin {

struct ControlAction;

/// Water-tank storage capacity for a volume and usable supply/return
/// temperature spread: V * 1000 kg/m3 * 4.186 kJ/(kg K) * dT / 3600.
double storage_capacity_from_geometry(double volume_m3, double delta_t_kelvin);

struct PlantParams {
  double p_gb_max = 200.0;   // kW
  double p_hp_max = 50.0;    // kW thermal
  double cop = 3.0;
  double e_min = 0.0;        // kWh
  double e_max = 0.0;        // kWh
  double e_curtail = 0.0;    // kWh, solar is rejected at or above this level
  double loss_k = 0.005;     // 1/h
  std::optional<double> ramp_hp;  // kW/h
  std::optional<double> ramp_gb;  // kW/h
  double solar_area = 70.0;  // m2

  // Defaults: 40 m3 tank at 20 K spread, e_min = 20%, e_curtail = 95%.
  static PlantParams defaults();

  // Throws InconsistentParams when an invariant is broken.
  void validate() const;

  bool operator==(const PlantParams&) const = default;
};

struct PlantState {
  double energy = 0.0;        // kWh
  double p_hp_prev = 0.0;     // kW applied in the previous step
  double p_gb_prev = 0.0;
  double cum_curtailed = 0.0; // kWh
  double cum_unmet = 0.0;     // kWh
  long step_index = 0;

  bool operator==(const PlantState&) const = default;
};

struct StepRecord {
  double p_hp_applied = 0.0;
  double p_gb_applied = 0.0;
  double p_solar_applied = 0.0;
  double p_consumer = 0.0;
  double energy_after = 0.0;
  double curtailed = 0.0;  // kWh: rejected solar plus any clamped surplus
  double unmet = 0.0;      // kWh of consumer draw the tank could not supply
  double loss = 0.0;       // kWh lost through the K*E term
  double dumped = 0.0;     // kWh of the clamped surplus (part of `curtailed`)

  bool operator==(const StepRecord&) const = default;
};

struct StepResult {
  PlantState state;
  StepRecord record;
};

/// One explicit-Euler step of the lumped storage balance
///   E' = E + dt*(P_hp + P_gb + P_solar - P_consumer) - dt*K*E
/// with capacity/ramp clamping, solar curtailment at e_curtail, shortfall
/// tracking at E=0 and surplus rejection at e_max.
StepResult step(const PlantState& state, const PlantParams& params,
                const ControlAction& action, double p_solar_avail,
                double p_consumer, double dt);

struct Snapshot {
  PlantState state;
};

inline Snapshot snapshot(const PlantState& state) { return Snapshot{state}; }
inline PlantState restore(const Snapshot& snap) { return snap.state; }

}  // namespace dhtwin
