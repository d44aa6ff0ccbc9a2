#pragma once

#include <optional>
#include <vector>

#include "dhtwin/forecast.hpp"
#include "dhtwin/lp.hpp"
#include "dhtwin/plant.hpp"

namespace dhtwin {

struct DispatchConfig {
  int horizon_steps = 48;
  double dt = 0.5;  // h
  bool use_commitment = false;
  double p_hp_min_on = 0.0;  // kW, only with use_commitment
  double p_gb_min_on = 0.0;
  std::optional<double> terminal_energy_min;  // kWh
  // Storage loss rate used by the planner; unset means the plant's loss_k.
  std::optional<double> model_loss_k;
};

// Column positions of the dispatch variables inside the LpProblem, plus the
// affine data needed to rebuild the energy trajectory from the powers.
struct DispatchIndex {
  int horizon = 0;
  bool commitment = false;
  double dt = 0.0;
  double decay = 1.0;               // 1 - K*dt
  std::vector<double> exogenous;    // dt*(solar_k - load_k), kWh

  int p_hp(int k) const { return k; }
  int p_gb(int k) const { return horizon + k; }
  int energy(int k) const { return 2 * horizon + k - 1; }  // k in [1, N]
  int u_hp(int k) const { return commitment ? 3 * horizon + k : -1; }
  int u_gb(int k) const { return commitment ? 4 * horizon + k : -1; }
  int num_vars() const { return (commitment ? 5 : 3) * horizon; }
};

struct DispatchProblem {
  LpProblem lp;
  DispatchIndex index;
};

struct DispatchPlan {
  std::vector<double> p_hp;    // kW, length N
  std::vector<double> p_gb;    // kW, length N
  std::vector<double> energy;  // kWh, length N+1, energy[0] = measured
  double planned_cost = 0.0;   // eur
};

/// Linear (or, with commitment, mixed-binary) program for one horizon:
///   E_{k+1} = (1 - K dt) E_k + dt (P_hp,k + P_gb,k + P_solar,k - P_load,k)
///   e_min <= E_k <= e_max,  0 <= P <= P_max,  optional ramp rows,
///   minimize sum_k dt (price_k P_hp,k / COP + gas P_gb,k).
/// `p_hp_prev`/`p_gb_prev` anchor the first-step ramp rows.
DispatchProblem build_problem(double state_energy, const ForecastBundle& bundle,
                              const PlantParams& params, const DispatchConfig& config,
                              double p_hp_prev = 0.0, double p_gb_prev = 0.0);

DispatchPlan extract_plan(const LpSolution& solution, const DispatchIndex& index,
                          double state_energy, const DispatchConfig& config);

}  // namespace dhtwin
