#include "dhtwin/dispatch.hpp"

#include <cmath>
#include <string>

#include "dhtwin/error.hpp"

namespace dhtwin {

DispatchProblem build_problem(double state_energy, const ForecastBundle& bundle,
                              const PlantParams& params, const DispatchConfig& config,
                              double p_hp_prev, double p_gb_prev) {
  const int n = config.horizon_steps;
  if (n < 1) throw Error(Errc::InconsistentParams, "horizon_steps must be >= 1");
  if (!(config.dt > 0.0)) throw Error(Errc::InconsistentParams, "dt must be > 0");
  if (!(params.e_min <= params.e_max) || params.e_min < 0.0)
    throw Error(Errc::InconsistentParams, "need 0 <= e_min <= e_max");
  if (!(params.cop > 0.0) || !(params.p_hp_max > 0.0) || !(params.p_gb_max > 0.0))
    throw Error(Errc::InconsistentParams, "cop and unit capacities must be > 0");
  if (config.use_commitment &&
      (config.p_hp_min_on < 0.0 || config.p_hp_min_on > params.p_hp_max ||
       config.p_gb_min_on < 0.0 || config.p_gb_min_on > params.p_gb_max))
    throw Error(Errc::InconsistentParams, "min-on levels must lie in [0, P_max]");
  if (bundle.load.size() < static_cast<std::size_t>(n))
    throw Error(Errc::HorizonTooLong, "forecast covers " + std::to_string(bundle.load.size()) +
                                          " steps, horizon needs " + std::to_string(n));
  if (std::abs(bundle.load.grid().step_hours() - config.dt) > 1e-9)
    throw Error(Errc::InconsistentParams, "forecast step differs from dispatch dt");
  if (!std::isfinite(state_energy) || state_energy < 0.0 || state_energy > params.e_max)
    throw Error(Errc::InvalidArgument, "state energy outside [0, e_max]");

  const double dt = config.dt;
  const double k_loss = config.model_loss_k.value_or(params.loss_k);

  DispatchIndex idx;
  idx.horizon = n;
  idx.commitment = config.use_commitment;
  idx.dt = dt;
  idx.decay = 1.0 - k_loss * dt;
  idx.exogenous.resize(n);

  LpProblem lp(idx.num_vars());
  for (int k = 0; k < n; ++k) {
    idx.exogenous[k] = dt * (bundle.solar[k] - bundle.load[k]);
    lp.bounds[idx.p_hp(k)] = {0.0, params.p_hp_max};
    lp.bounds[idx.p_gb(k)] = {0.0, params.p_gb_max};
    lp.bounds[idx.energy(k + 1)] = {params.e_min, params.e_max};
    lp.objective[idx.p_hp(k)] = dt * bundle.elec_price[k] / params.cop;
    lp.objective[idx.p_gb(k)] = dt * bundle.gas_price;
  }

  // Dynamics, E_0 folded into the first right-hand side.
  for (int k = 0; k < n; ++k) {
    std::vector<Term> row{{idx.energy(k + 1), 1.0},
                          {idx.p_hp(k), -dt},
                          {idx.p_gb(k), -dt}};
    double rhs = idx.exogenous[k];
    if (k == 0)
      rhs += idx.decay * state_energy;
    else
      row.push_back({idx.energy(k), -idx.decay});
    lp.add_constraint(std::move(row), Relation::EQ, rhs);
  }

  if (config.use_commitment) {
    for (int k = 0; k < n; ++k) {
      lp.set_binary(idx.u_hp(k));
      lp.set_binary(idx.u_gb(k));
      lp.add_constraint({{idx.p_hp(k), 1.0}, {idx.u_hp(k), -params.p_hp_max}}, Relation::LE, 0.0);
      lp.add_constraint({{idx.p_hp(k), 1.0}, {idx.u_hp(k), -config.p_hp_min_on}}, Relation::GE,
                        0.0);
      lp.add_constraint({{idx.p_gb(k), 1.0}, {idx.u_gb(k), -params.p_gb_max}}, Relation::LE, 0.0);
      lp.add_constraint({{idx.p_gb(k), 1.0}, {idx.u_gb(k), -config.p_gb_min_on}}, Relation::GE,
                        0.0);
    }
  }

  auto add_ramp = [&](const std::optional<double>& ramp, auto column, double prev) {
    if (!ramp) return;
    const double step = *ramp * dt;
    lp.add_constraint({{column(0), 1.0}}, Relation::LE, prev + step);
    lp.add_constraint({{column(0), 1.0}}, Relation::GE, prev - step);
    for (int k = 1; k < n; ++k) {
      lp.add_constraint({{column(k), 1.0}, {column(k - 1), -1.0}}, Relation::LE, step);
      lp.add_constraint({{column(k), 1.0}, {column(k - 1), -1.0}}, Relation::GE, -step);
    }
  };
  add_ramp(params.ramp_hp, [&](int k) { return idx.p_hp(k); }, p_hp_prev);
  add_ramp(params.ramp_gb, [&](int k) { return idx.p_gb(k); }, p_gb_prev);

  if (config.terminal_energy_min)
    lp.add_constraint({{idx.energy(n), 1.0}}, Relation::GE, *config.terminal_energy_min);

  return {std::move(lp), std::move(idx)};
}

DispatchPlan extract_plan(const LpSolution& solution, const DispatchIndex& index,
                          double state_energy, const DispatchConfig& config) {
  if (solution.status != LpStatus::Optimal || !solution.has_x())
    throw Error(Errc::NotOptimal,
                "cannot extract a plan from status " + std::string(status_name(solution.status)));
  const int n = index.horizon;
  if (solution.x.size() != static_cast<std::size_t>(index.num_vars()) ||
      std::abs(index.dt - config.dt) > 1e-12)
    throw Error(Errc::DimensionMismatch, "solution does not match the dispatch index");
  DispatchPlan plan;
  plan.p_hp.resize(n);
  plan.p_gb.resize(n);
  plan.energy.resize(n + 1);
  plan.energy[0] = state_energy;
  double rebuilt = state_energy;
  for (int k = 0; k < n; ++k) {
    plan.p_hp[k] = solution.x[index.p_hp(k)];
    plan.p_gb[k] = solution.x[index.p_gb(k)];
    plan.energy[k + 1] = solution.x[index.energy(k + 1)];
    rebuilt = index.decay * rebuilt + index.dt * (plan.p_hp[k] + plan.p_gb[k]) +
              index.exogenous[k];
    if (std::abs(rebuilt - plan.energy[k + 1]) > 1e-6)
      throw Error(Errc::InternalConsistency,
                  "planned energy at step " + std::to_string(k + 1) +
                      " deviates from the dynamics by " +
                      std::to_string(std::abs(rebuilt - plan.energy[k + 1])) + " kWh");
  }
  plan.planned_cost = solution.objective_value;
  return plan;
}

}  // namespace dhtwin
