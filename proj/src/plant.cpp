#include "dhtwin/plant.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dhtwin/control.hpp"
#include "dhtwin/error.hpp"

namespace dhtwin {

double storage_capacity_from_geometry(double volume_m3, double delta_t_kelvin) {
  if (!(volume_m3 > 0.0) || !(delta_t_kelvin > 0.0))
    throw Error(Errc::NonPositiveInput, "volume and temperature spread must be > 0");
  constexpr double kDensity = 1000.0;      // kg/m3
  constexpr double kHeatCapacity = 4.186;  // kJ/(kg K)
  return volume_m3 * kDensity * kHeatCapacity * delta_t_kelvin / 3600.0;
}

PlantParams PlantParams::defaults() {
  PlantParams p;
  p.e_max = storage_capacity_from_geometry(40.0, 20.0);
  p.e_min = 0.2 * p.e_max;
  p.e_curtail = 0.95 * p.e_max;
  return p;
}

void PlantParams::validate() const {
  auto bad = [](const std::string& what) {
    return Error(Errc::InconsistentParams, what);
  };
  if (!(e_min > 0.0 && e_min < e_curtail && e_curtail <= e_max))
    throw bad("need 0 < e_min < e_curtail <= e_max");
  if (!(p_gb_max > 0.0) || !(p_hp_max > 0.0)) throw bad("unit capacities must be > 0");
  if (!(cop > 0.0)) throw bad("cop must be > 0");
  if (!(loss_k >= 0.0)) throw bad("loss_k must be >= 0");
  if (ramp_hp && !(*ramp_hp >= 0.0)) throw bad("ramp_hp must be >= 0");
  if (ramp_gb && !(*ramp_gb >= 0.0)) throw bad("ramp_gb must be >= 0");
  if (!(solar_area >= 0.0)) throw bad("solar_area must be >= 0");
}

namespace {

double apply_limits(double commanded, double p_max, double prev,
                    const std::optional<double>& ramp, double dt) {
  double lo = 0.0;
  double hi = p_max;
  if (ramp) {
    lo = std::max(lo, prev - *ramp * dt);
    hi = std::min(hi, prev + *ramp * dt);
    if (lo > hi) lo = hi;  // previous power outside [0, p_max]
  }
  return std::clamp(commanded, lo, hi);
}

}  // namespace

StepResult step(const PlantState& state, const PlantParams& params,
                const ControlAction& action, double p_solar_avail,
                double p_consumer, double dt) {
  if (!std::isfinite(action.p_hp_set) || !std::isfinite(action.p_gb_set) ||
      !std::isfinite(p_solar_avail) || !std::isfinite(p_consumer) ||
      !std::isfinite(dt) || !std::isfinite(state.energy))
    throw Error(Errc::NonFiniteInput, "plant step received a non-finite input");
  if (!(dt > 0.0)) throw Error(Errc::InvalidArgument, "dt must be > 0");
  if (p_solar_avail < 0.0 || p_consumer < 0.0)
    throw Error(Errc::InvalidArgument, "solar and consumer power must be >= 0");

  StepRecord rec;
  rec.p_consumer = p_consumer;
  rec.p_hp_applied =
      apply_limits(action.p_hp_set, params.p_hp_max, state.p_hp_prev, params.ramp_hp, dt);
  rec.p_gb_applied =
      apply_limits(action.p_gb_set, params.p_gb_max, state.p_gb_prev, params.ramp_gb, dt);
  rec.p_solar_applied = state.energy < params.e_curtail ? p_solar_avail : 0.0;
  rec.loss = dt * params.loss_k * state.energy;

  auto balance = [&] {
    return state.energy +
           dt * (rec.p_hp_applied + rec.p_gb_applied + rec.p_solar_applied - p_consumer) -
           rec.loss;
  };
  double e_next = balance();

  if (e_next > params.e_max && rec.p_solar_applied > 0.0) {
    rec.p_solar_applied = 0.0;
    e_next = balance();
  }
  rec.curtailed = (p_solar_avail - rec.p_solar_applied) * dt;
  if (e_next > params.e_max) {
    rec.dumped = e_next - params.e_max;
    rec.curtailed += rec.dumped;
    e_next = params.e_max;
  }
  if (e_next < 0.0) {
    rec.unmet = -e_next;
    e_next = 0.0;
  }
  rec.energy_after = e_next;

  PlantState next = state;
  next.energy = e_next;
  next.p_hp_prev = rec.p_hp_applied;
  next.p_gb_prev = rec.p_gb_applied;
  next.cum_curtailed += rec.curtailed;
  next.cum_unmet += rec.unmet;
  next.step_index += 1;
  return {next, rec};
}

}  // namespace dhtwin
