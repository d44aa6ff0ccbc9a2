#include "dhtwin/control.hpp"

#include <algorithm>

#include "dhtwin/error.hpp"

namespace dhtwin {

std::string_view origin_name(ActionOrigin o) noexcept {
  switch (o) {
    case ActionOrigin::RBC: return "RBC";
    case ActionOrigin::MPC: return "MPC";
    case ActionOrigin::MPC_FALLBACK: return "MPC_FALLBACK";
  }
  return "?";
}

ControlAction rbc_decide(const Measurement& m, const PlantParams& params,
                         const RbcParams& rbc) {
  const double deficit = std::max(0.0, rbc.e_min - m.energy);
  const double restore = rbc.k_restore * deficit;
  double target = std::max(0.0, m.net_load) + restore;
  if (rbc.cap_to_capacity)
    target = std::min(target, std::max(0.0, m.net_load + (params.e_max - m.energy) / rbc.dt));
  ControlAction a;
  a.p_hp_set = std::min(target, params.p_hp_max);
  a.p_gb_set = std::min(target - a.p_hp_set, params.p_gb_max);
  a.origin = ActionOrigin::RBC;
  return a;
}

MpcDecision mpc_decide(const Measurement& m, const PlantState& state,
                       const ForecastBundle& bundle, const PlantParams& params,
                       const DispatchConfig& config, const SolverOptions& options,
                       const RbcParams& fallback) {
  MpcDecision d;
  try {
    const auto problem =
        build_problem(state.energy, bundle, params, config, state.p_hp_prev, state.p_gb_prev);
    const auto sol = config.use_commitment ? solve_milp(problem.lp, options)
                                           : solve_lp(problem.lp, options);
    d.status = sol.status;
    d.iterations = sol.iterations;
    d.nodes = sol.nodes_explored;
    if (sol.status == LpStatus::Optimal) {
      auto plan = extract_plan(sol, problem.index, state.energy, config);
      d.action = {std::clamp(plan.p_hp[0], 0.0, params.p_hp_max),
                  std::clamp(plan.p_gb[0], 0.0, params.p_gb_max), ActionOrigin::MPC};
      d.plan = std::move(plan);
      return d;
    }
    d.note = "solver status " + std::string(status_name(sol.status));
  } catch (const Error& e) {
    d.build_failed = true;
    d.status = LpStatus::Infeasible;
    d.note = e.what();
  }
  d.action = rbc_decide(m, params, fallback);
  d.action.origin = ActionOrigin::MPC_FALLBACK;
  return d;
}

}  // namespace dhtwin
