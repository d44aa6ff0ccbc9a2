#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dhtwin/dispatch.hpp"
#include "dhtwin/forecast.hpp"
#include "dhtwin/lp.hpp"
#include "dhtwin/plant.hpp"

namespace dhtwin {

enum class ActionOrigin { RBC, MPC, MPC_FALLBACK };

std::string_view origin_name(ActionOrigin o) noexcept;

struct ControlAction {
  double p_hp_set = 0.0;  // kW
  double p_gb_set = 0.0;  // kW
  ActionOrigin origin = ActionOrigin::RBC;

  bool operator==(const ControlAction&) const = default;
};

struct RbcParams {
  double e_min = 0.0;       // kWh
  double k_restore = 0.5;   // 1/h gain on the energy deficit
  double dt = 0.5;          // h, horizon of the e_max projection cap
  bool cap_to_capacity = true;
};

struct Measurement {
  double energy = 0.0;    // kWh
  double net_load = 0.0;  // kW, consumer minus solar, last observed
};

/// Reactive rule: cover the net load plus a restore term proportional to
/// the deficit below e_min, heat pump first, boiler for the remainder.
ControlAction rbc_decide(const Measurement& m, const PlantParams& params,
                         const RbcParams& rbc);

struct MpcDecision {
  ControlAction action;
  std::optional<DispatchPlan> plan;
  LpStatus status = LpStatus::Optimal;
  bool build_failed = false;
  std::string note;  // why the fallback fired, empty otherwise
  long iterations = 0;
  long nodes = 0;
};

/// Solve one receding-horizon dispatch and apply its first step; any
/// failure to reach an Optimal solution falls back to rbc_decide.
MpcDecision mpc_decide(const Measurement& m, const PlantState& state,
                       const ForecastBundle& bundle, const PlantParams& params,
                       const DispatchConfig& config, const SolverOptions& options,
                       const RbcParams& fallback);

}  // namespace dhtwin
