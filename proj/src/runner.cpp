#include "dhtwin/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <random>

#include "dhtwin/error.hpp"

namespace dhtwin {

namespace {

constexpr std::uint64_t kTrainingSeedOffset = 1'000'003;
constexpr std::uint64_t kSolarNoiseSalt = 0x5A17C0FFEE5EEDULL;

struct Weather {
  TimeSeries irradiance;
  TimeSeries ambient;
};

Weather synthetic_weather(const SyntheticDataConfig& s, const TimeGrid& grid,
                          std::uint64_t seed) {
  return {generate_synthetic({SyntheticKind::solar_irradiance, s.irradiance_peak, seed,
                              s.irradiance_noise},
                             grid),
          generate_synthetic({SyntheticKind::ambient_temp, s.ambient_peak, seed, s.ambient_noise},
                             grid)};
}

// Reference-field production with multiplicative measurement-like noise.
TimeSeries synthetic_production(const SyntheticDataConfig& s, const Weather& w, double area,
                                std::uint64_t seed) {
  std::mt19937_64 gen(seed ^ kSolarNoiseSalt);
  std::vector<double> v(w.irradiance.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double u = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
    const double g = w.irradiance[i];
    if (g <= 0.0) continue;
    const double useful =
        area * (s.collector_eta0 * g - s.collector_u * (s.collector_temp - w.ambient[i])) / 1000.0;
    v[i] = std::max(0.0, useful) * (1.0 + s.forecast_noise * u);
  }
  return TimeSeries(w.irradiance.grid(), std::move(v), Unit::kW);
}

TimeSeries scaled(const TimeSeries& s, double factor) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (auto& x : v) x *= factor;
  return TimeSeries(s.grid(), std::move(v), s.unit());
}

TimeSeries offset(const TimeSeries& s, double shift) {
  std::vector<double> v(s.values().begin(), s.values().end());
  for (auto& x : v) x += shift;
  return TimeSeries(s.grid(), std::move(v), s.unit());
}

std::size_t required_length(const ScenarioConfig& c) {
  return c.period_steps() +
         (c.controller == ControllerKind::MPC ? static_cast<std::size_t>(c.dispatch.horizon_steps)
                                              : 0);
}

// Window of `series` that starts at the period start.
TimeSeries align(const TimeSeries& series, const ScenarioConfig& c, std::size_t length,
                 const char* what) {
  const auto& g = series.grid();
  const auto step = static_cast<std::int64_t>(std::llround(c.control_step * 3600.0));
  if (g.step_seconds() != step)
    throw Error(Errc::ConfigInvalid, std::string(what) + " step differs from control step");
  const auto offset = c.period_start - g.start();
  if (offset < 0 || offset % step != 0)
    throw Error(Errc::DataExhausted, std::string(what) + " does not start on or before the period");
  const auto first = static_cast<std::size_t>(offset / step);
  if (first + length > g.count())
    throw Error(Errc::DataExhausted, std::string(what) + " has " + std::to_string(g.count()) +
                                         " points, run needs " + std::to_string(first + length));
  return slice_window(series, first, length);
}

}  // namespace

ScenarioData prepare_data(const ScenarioConfig& config) {
  config.validate();
  const double area_scale = config.plant.solar_area / config.data.solar_area_ref;

  if (config.data.mode == DataConfig::Mode::synthetic) {
    const auto& s = config.data.synthetic;
    const std::size_t count =
        config.period_steps() + static_cast<std::size_t>(config.dispatch.horizon_steps);
    const TimeGrid grid(config.period_start, config.control_step, count);
    const auto weather = synthetic_weather(s, grid, config.seed);
    const auto production_ref =
        synthetic_production(s, weather, config.data.solar_area_ref, config.seed);

    ScenarioData d{
        generate_synthetic({SyntheticKind::heat_load, s.load_peak, config.seed, s.load_noise},
                           grid),
        scaled(production_ref, area_scale),
        offset(generate_synthetic(
                   {SyntheticKind::elec_price, s.price_peak, config.seed, s.price_noise}, grid),
               s.price_fixed),
        scaled(production_ref, area_scale),
        weather.irradiance,
        weather.ambient,
        std::nullopt};

    if (!config.perfect_forecast) {
      // Fit on a preceding, non-overlapping window with its own seed.
      const std::size_t steps_per_day =
          static_cast<std::size_t>(std::llround(24.0 / config.control_step));
      const std::size_t train_count =
          static_cast<std::size_t>(std::max(1, s.training_days)) * steps_per_day;
      const TimeGrid train_grid = TimeGrid::from_seconds(
          config.period_start - static_cast<Timestamp>(train_count) * grid.step_seconds(),
          grid.step_seconds(), train_count);
      const auto train_seed = config.seed + kTrainingSeedOffset;
      const auto train_weather = synthetic_weather(s, train_grid, train_seed);
      const auto train_prod =
          synthetic_production(s, train_weather, config.data.solar_area_ref, train_seed);
      d.fit = fit_solar(train_weather.irradiance, train_weather.ambient, train_prod);
      d.solar_predicted = predict_solar(*d.fit, weather.irradiance, weather.ambient, area_scale);
    }
    return d;
  }

  const auto table = read_csv_table(config.data.csv.timeseries);
  const std::size_t len = required_length(config);
  auto load = align(table.column("load_kW"), config, len, "load");
  auto solar = scaled(align(table.column("solar_kW"), config, len, "solar"), area_scale);
  auto price = align(table.column("price_eur_per_kWh"), config, len, "price");
  ScenarioData d{std::move(load), solar, std::move(price), solar, std::nullopt, std::nullopt,
                 std::nullopt};
  if (!config.data.csv.weather.empty()) {
    const auto w = read_csv_table(config.data.csv.weather);
    d.irradiance = align(w.column("irradiance_W_per_m2"), config, len, "irradiance");
    d.ambient = align(w.column("ambient_degC"), config, len, "ambient");
    if (config.data.csv.solar_fit && !config.perfect_forecast) {
      d.fit = config.data.csv.solar_fit;
      d.solar_predicted = predict_solar(*d.fit, *d.irradiance, *d.ambient, area_scale);
    }
  }
  return d;
}

RunResult run_scenario(const ScenarioConfig& config) {
  return run_scenario(config, prepare_data(config));
}

RunResult run_scenario(const ScenarioConfig& config, const ScenarioData& data) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t steps = config.period_steps();
  const bool mpc = config.controller == ControllerKind::MPC;
  const std::size_t need = steps + (mpc ? static_cast<std::size_t>(config.dispatch.horizon_steps) : 0);
  for (const TimeSeries* s : {&data.load, &data.solar_actual, &data.elec_price, &data.solar_predicted})
    if (s->size() < need)
      throw Error(Errc::DataExhausted, "input series have " + std::to_string(s->size()) +
                                           " points, run needs " + std::to_string(need));
  if (data.load.grid().start() != config.period_start ||
      std::abs(data.load.grid().step_hours() - config.control_step) > 1e-12)
    throw Error(Errc::ConfigInvalid, "input grid does not match the period and control step");

  const double dt = config.control_step;
  RbcParams rbc = config.rbc;
  rbc.dt = dt;
  DispatchConfig dc = config.dispatch;
  dc.dt = dt;
  const Actuals actuals{data.load, data.solar_actual, data.elec_price};

  RunResult r;
  r.initial_energy = config.start_energy();
  r.steps.reserve(steps);
  r.decisions.reserve(steps);
  PlantState state;
  state.energy = r.initial_energy;
  KpiReport& k = r.kpi;
  double last_net_load = data.load[0] - data.solar_actual[0];

  for (std::size_t i = 0; i < steps; ++i) {
    const Timestamp ts = data.load.grid().timestamp(i);
    const Measurement m{state.energy, last_net_load};
    DecisionRow dr{ts, {}, "none", 0, std::nullopt};
    if (!mpc) {
      dr.action = rbc_decide(m, config.plant, rbc);
    } else {
      const auto bundle = make_bundle(actuals, data.solar_predicted, i,
                                      static_cast<std::size_t>(dc.horizon_steps), config.gas_price);
      if (!config.dump_dir.empty() &&
          std::find(config.dump_steps.begin(), config.dump_steps.end(), static_cast<long>(i)) !=
              config.dump_steps.end()) {
        const auto p = build_problem(state.energy, bundle, config.plant, dc, state.p_hp_prev,
                                     state.p_gb_prev);
        std::filesystem::create_directories(config.dump_dir);
        std::ofstream out(std::filesystem::path(config.dump_dir) /
                          ("step_" + std::to_string(i) + ".lp"));
        write_lp(p.lp, out);
      }
      const auto dec =
          mpc_decide(m, state, bundle, config.plant, dc, config.solver, rbc);
      dr.action = dec.action;
      dr.solver_status = dec.build_failed ? "BuildError" : std::string(status_name(dec.status));
      dr.solver_iterations = dec.iterations;
      if (dec.plan) dr.planned_cost = dec.plan->planned_cost;
      if (dec.action.origin == ActionOrigin::MPC_FALLBACK) ++k.fallbacks;
    }

    const auto res = step(state, config.plant, dr.action, data.solar_actual[i], data.load[i], dt);
    state = res.state;
    const auto& rec = res.record;
    k.cost_elec += dt * data.elec_price[i] * rec.p_hp_applied / config.plant.cop;
    k.cost_gas += dt * config.gas_price * rec.p_gb_applied;
    k.energy_hp += dt * rec.p_hp_applied;
    k.energy_gb += dt * rec.p_gb_applied;
    k.energy_solar += dt * rec.p_solar_applied;
    k.curtailed += rec.curtailed;
    k.unmet += rec.unmet;
    last_net_load = data.load[i] - rec.p_solar_applied;

    r.steps.push_back({ts, rec, data.elec_price[i]});
    r.decisions.push_back(std::move(dr));
  }

  r.final_energy = state.energy;
  k.scenario = config.name;
  k.controller = std::string(controller_name(config.controller));
  k.period_start = config.period_start;
  k.period_end = config.period_end;
  k.steps = static_cast<long>(steps);
  finalize_shares(k);
  k.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& configs, kernels::Exec exec) {
  const auto n = static_cast<std::int64_t>(configs.size());
  std::vector<std::optional<RunResult>> out(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  const bool parallel = exec == kernels::Exec::parallel || (exec == kernels::Exec::automatic && n > 1);
  auto run_one = [&](std::int64_t i) {
    try {
      out[i] = run_scenario(configs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) run_one(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) run_one(i);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<RunResult> results;
  results.reserve(out.size());
  for (auto& r : out) results.push_back(std::move(*r));
  return results;
}

OpenLoopResult run_open_loop(const ScenarioConfig& config, const ScenarioData& data) {
  config.validate();
  const std::size_t steps = config.period_steps();
  const double dt = config.control_step;
  DispatchConfig dc = config.dispatch;
  dc.dt = dt;
  dc.horizon_steps = static_cast<int>(steps);
  dc.use_commitment = false;
  const Actuals actuals{data.load, data.solar_actual, data.elec_price};
  const auto bundle = make_bundle(actuals, data.solar_predicted, 0, steps, config.gas_price);
  const double e0 = config.start_energy();
  const auto problem = build_problem(e0, bundle, config.plant, dc);

  OpenLoopResult out;
  out.solution = solve_lp(problem.lp, config.solver);
  if (out.solution.status != LpStatus::Optimal) return out;
  out.plan = extract_plan(out.solution, problem.index, e0, dc);

  RunResult& r = out.replay;
  r.initial_energy = e0;
  PlantState state;
  state.energy = e0;
  KpiReport& k = r.kpi;
  for (std::size_t i = 0; i < steps; ++i) {
    const Timestamp ts = data.load.grid().timestamp(i);
    const ControlAction a{out.plan->p_hp[i], out.plan->p_gb[i], ActionOrigin::MPC};
    const auto res = step(state, config.plant, a, data.solar_actual[i], data.load[i], dt);
    state = res.state;
    const auto& rec = res.record;
    k.cost_elec += dt * data.elec_price[i] * rec.p_hp_applied / config.plant.cop;
    k.cost_gas += dt * config.gas_price * rec.p_gb_applied;
    k.energy_hp += dt * rec.p_hp_applied;
    k.energy_gb += dt * rec.p_gb_applied;
    k.energy_solar += dt * rec.p_solar_applied;
    k.curtailed += rec.curtailed;
    k.unmet += rec.unmet;
    r.steps.push_back({ts, rec, data.elec_price[i]});
    r.decisions.push_back({ts, a, std::string(status_name(out.solution.status)),
                           i == 0 ? out.solution.iterations : 0,
                           i == 0 ? std::optional<double>(out.plan->planned_cost) : std::nullopt});
  }
  r.final_energy = state.energy;
  k.scenario = config.name;
  k.controller = "open_loop";
  k.period_start = config.period_start;
  k.period_end = config.period_end;
  k.steps = static_cast<long>(steps);
  finalize_shares(k);
  return out;
}

}  // namespace dhtwin
