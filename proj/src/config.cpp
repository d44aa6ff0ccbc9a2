#include "dhtwin/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "dhtwin/error.hpp"
#include "json.hpp"

namespace dhtwin {

using json = nlohmann::json;

std::string_view controller_name(ControllerKind c) noexcept {
  return c == ControllerKind::RBC ? "rbc" : "mpc";
}

ControllerKind parse_controller(std::string_view s) {
  if (s == "rbc" || s == "RBC") return ControllerKind::RBC;
  if (s == "mpc" || s == "MPC") return ControllerKind::MPC;
  throw Error(Errc::ConfigInvalid, "controller must be rbc or mpc, got '" + std::string(s) + "'");
}

std::size_t ScenarioConfig::period_steps() const {
  const auto step = static_cast<std::int64_t>(std::llround(control_step * 3600.0));
  if (step <= 0 || period_end <= period_start) return 0;
  return static_cast<std::size_t>((period_end - period_start) / step);
}

void ScenarioConfig::validate() const {
  auto bad = [](const std::string& m) { return Error(Errc::ConfigInvalid, m); };
  if (!(control_step > 0.0)) throw bad("control_step_hours must be > 0");
  const double secs = control_step * 3600.0;
  if (std::abs(secs - std::round(secs)) > 1e-6) throw bad("control step must be whole seconds");
  const auto step = static_cast<std::int64_t>(std::llround(secs));
  if (period_end - period_start < step) throw bad("period must span at least one control step");
  if ((period_end - period_start) % step != 0)
    throw bad("period length must be a whole number of control steps");
  try {
    plant.validate();
  } catch (const Error& e) {
    throw bad(e.what());
  }
  if (initial_energy && (*initial_energy < 0.0 || *initial_energy > plant.e_max))
    throw bad("initial energy outside [0, e_max]");
  if (!(rbc.k_restore > 0.0)) throw bad("k_restore must be > 0");
  if (dispatch.horizon_steps < 1) throw bad("horizon_steps must be >= 1");
  if (!(gas_price > 0.0)) throw bad("gas price must be > 0");
  if (!(solver.feas_tol > 0.0 && solver.int_tol > 0.0 && solver.mip_gap > 0.0))
    throw bad("solver tolerances must be > 0");
  if (!(data.solar_area_ref > 0.0)) throw bad("solar_area_ref must be > 0");
  if (!(data.synthetic.price_fixed >= 0.0)) throw bad("price_fixed must be >= 0");
  if (data.mode == DataConfig::Mode::csv && data.csv.timeseries.empty())
    throw bad("csv data mode needs data.csv.timeseries");
}

ScenarioConfig builtin_scenario(std::string_view name) {
  ScenarioConfig c;
  c.name = std::string(name);
  if (name == "A") {
    c.plant.p_gb_max = 200.0;
    c.plant.p_hp_max = 50.0;
    c.plant.solar_area = 70.0;
  } else if (name == "B") {
    c.plant.p_gb_max = 180.0;
    c.plant.p_hp_max = 70.0;
    c.plant.solar_area = 70.0;
  } else if (name == "C") {
    c.plant.p_gb_max = 200.0;
    c.plant.p_hp_max = 50.0;
    c.plant.solar_area = 35.0;
  } else {
    throw Error(Errc::ConfigInvalid, "unknown built-in scenario '" + std::string(name) + "'");
  }
  c.rbc.e_min = c.plant.e_min;
  c.dispatch.p_hp_min_on = 0.2 * c.plant.p_hp_max;
  c.dispatch.p_gb_min_on = 0.2 * c.plant.p_gb_max;
  c.period_start = parse_iso8601("2017-10-01T00:00:00Z");
  c.period_end = parse_iso8601("2017-12-26T00:00:00Z");
  return c;
}

std::vector<ScenarioConfig> builtin_scenarios() {
  return {builtin_scenario("A"), builtin_scenario("B"), builtin_scenario("C")};
}

// --- JSON ------------------------------------------------------------------

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void check_keys(const json& j, std::string_view where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw Error(Errc::ConfigInvalid, std::string(where) + " must be an object");
  for (const auto& [k, _] : j.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known)
      throw Error(Errc::ConfigInvalid, "unknown key '" + k + "' in " + std::string(where));
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_opt(const json& j, const char* key, std::optional<double>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null())
    out.reset();
  else
    out = j.at(key).get<double>();
}

json coeff_json(const SolarFitCoefficients& c) {
  return {{"a_irradiance", c.a_irradiance}, {"b_ambient", c.b_ambient}, {"c_offset", c.c_offset}};
}

SolarFitCoefficients coeff_from(const json& j) {
  check_keys(j, "solar_fit", {"a_irradiance", "b_ambient", "c_offset"});
  SolarFitCoefficients c;
  c.a_irradiance = j.at("a_irradiance").get<double>();
  c.b_ambient = j.at("b_ambient").get<double>();
  c.c_offset = j.at("c_offset").get<double>();
  return c;
}

}  // namespace

std::string config_to_json(const ScenarioConfig& c) {
  const auto& p = c.plant;
  const auto& s = c.data.synthetic;
  json j;
  j["name"] = c.name;
  j["controller"] = std::string(controller_name(c.controller));
  j["seed"] = c.seed;
  j["period"] = {{"start", format_iso8601(c.period_start)}, {"end", format_iso8601(c.period_end)}};
  j["control_step_hours"] = c.control_step;
  j["gas_price_eur_per_kWh"] = c.gas_price;
  j["perfect_forecast"] = c.perfect_forecast;
  j["initial_energy_kWh"] = opt(c.initial_energy);
  j["plant"] = {{"p_gb_max_kW", p.p_gb_max},       {"p_hp_max_kW", p.p_hp_max},
                {"cop", p.cop},                    {"e_min_kWh", p.e_min},
                {"e_max_kWh", p.e_max},            {"e_curtail_kWh", p.e_curtail},
                {"loss_k_per_h", p.loss_k},        {"ramp_hp_kW_per_h", opt(p.ramp_hp)},
                {"ramp_gb_kW_per_h", opt(p.ramp_gb)}, {"solar_area_m2", p.solar_area}};
  j["rbc"] = {{"e_min_kWh", c.rbc.e_min},
              {"k_restore_per_h", c.rbc.k_restore},
              {"cap_to_capacity", c.rbc.cap_to_capacity}};
  j["dispatch"] = {{"horizon_steps", c.dispatch.horizon_steps},
                   {"use_commitment", c.dispatch.use_commitment},
                   {"p_hp_min_on_kW", c.dispatch.p_hp_min_on},
                   {"p_gb_min_on_kW", c.dispatch.p_gb_min_on},
                   {"terminal_energy_min_kWh", opt(c.dispatch.terminal_energy_min)},
                   {"model_loss_k_per_h", opt(c.dispatch.model_loss_k)}};
  j["solver"] = {{"feas_tol", c.solver.feas_tol},
                 {"int_tol", c.solver.int_tol},
                 {"max_iterations", c.solver.max_iterations},
                 {"max_nodes", c.solver.max_nodes},
                 {"mip_gap", c.solver.mip_gap}};
  json csv = {{"timeseries", c.data.csv.timeseries}, {"weather", c.data.csv.weather}};
  csv["solar_fit"] = c.data.csv.solar_fit ? coeff_json(*c.data.csv.solar_fit) : json(nullptr);
  j["data"] = {
      {"mode", c.data.mode == DataConfig::Mode::csv ? "csv" : "synthetic"},
      {"solar_area_ref_m2", c.data.solar_area_ref},
      {"synthetic",
       {{"load_peak_kW", s.load_peak},
        {"load_noise", s.load_noise},
        {"irradiance_peak_W_per_m2", s.irradiance_peak},
        {"irradiance_noise", s.irradiance_noise},
        {"ambient_peak_degC", s.ambient_peak},
        {"ambient_noise", s.ambient_noise},
        {"price_peak_eur_per_kWh", s.price_peak},
        {"price_noise", s.price_noise},
        {"price_fixed_eur_per_kWh", s.price_fixed},
        {"collector_eta0", s.collector_eta0},
        {"collector_u_W_per_m2K", s.collector_u},
        {"collector_temp_degC", s.collector_temp},
        {"forecast_noise", s.forecast_noise},
        {"training_days", s.training_days}}},
      {"csv", csv}};
  j["debug"] = {{"dump_dir", c.dump_dir}, {"dump_steps", c.dump_steps}};
  return j.dump(2) + "\n";
}

ScenarioConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("bad JSON: ") + e.what());
  }
  // Absent keys keep the scenario-A benchmark values.
  ScenarioConfig c = builtin_scenario("A");
  try {
    check_keys(j, "config",
               {"name", "controller", "seed", "period", "control_step_hours",
                "gas_price_eur_per_kWh", "perfect_forecast", "initial_energy_kWh", "plant", "rbc",
                "dispatch", "solver", "data", "debug"});
    read(j, "name", c.name);
    if (j.contains("controller")) c.controller = parse_controller(j.at("controller").get<std::string>());
    read(j, "seed", c.seed);
    if (j.contains("period")) {
      const auto& per = j.at("period");
      check_keys(per, "period", {"start", "end"});
      c.period_start = parse_iso8601(per.at("start").get<std::string>());
      c.period_end = parse_iso8601(per.at("end").get<std::string>());
    }
    read(j, "control_step_hours", c.control_step);
    read(j, "gas_price_eur_per_kWh", c.gas_price);
    read(j, "perfect_forecast", c.perfect_forecast);
    read_opt(j, "initial_energy_kWh", c.initial_energy);

    bool rbc_emin_given = false;
    if (j.contains("plant")) {
      const auto& p = j.at("plant");
      check_keys(p, "plant",
                 {"p_gb_max_kW", "p_hp_max_kW", "cop", "e_min_kWh", "e_max_kWh", "e_curtail_kWh",
                  "loss_k_per_h", "ramp_hp_kW_per_h", "ramp_gb_kW_per_h", "solar_area_m2"});
      auto& pp = c.plant;
      read(p, "p_gb_max_kW", pp.p_gb_max);
      read(p, "p_hp_max_kW", pp.p_hp_max);
      read(p, "cop", pp.cop);
      // A new e_max rescales the derived thresholds unless they are given.
      if (p.contains("e_max_kWh")) {
        pp.e_max = p.at("e_max_kWh").get<double>();
        pp.e_min = 0.2 * pp.e_max;
        pp.e_curtail = 0.95 * pp.e_max;
      }
      read(p, "e_min_kWh", pp.e_min);
      read(p, "e_curtail_kWh", pp.e_curtail);
      read(p, "loss_k_per_h", pp.loss_k);
      read_opt(p, "ramp_hp_kW_per_h", pp.ramp_hp);
      read_opt(p, "ramp_gb_kW_per_h", pp.ramp_gb);
      read(p, "solar_area_m2", pp.solar_area);
    }
    if (j.contains("rbc")) {
      const auto& r = j.at("rbc");
      check_keys(r, "rbc", {"e_min_kWh", "k_restore_per_h", "cap_to_capacity"});
      rbc_emin_given = r.contains("e_min_kWh");
      read(r, "e_min_kWh", c.rbc.e_min);
      read(r, "k_restore_per_h", c.rbc.k_restore);
      read(r, "cap_to_capacity", c.rbc.cap_to_capacity);
    }
    if (!rbc_emin_given) c.rbc.e_min = c.plant.e_min;
    c.dispatch.p_hp_min_on = 0.2 * c.plant.p_hp_max;
    c.dispatch.p_gb_min_on = 0.2 * c.plant.p_gb_max;
    if (j.contains("dispatch")) {
      const auto& d = j.at("dispatch");
      check_keys(d, "dispatch",
                 {"horizon_steps", "use_commitment", "p_hp_min_on_kW", "p_gb_min_on_kW",
                  "terminal_energy_min_kWh", "model_loss_k_per_h"});
      read(d, "horizon_steps", c.dispatch.horizon_steps);
      read(d, "use_commitment", c.dispatch.use_commitment);
      read(d, "p_hp_min_on_kW", c.dispatch.p_hp_min_on);
      read(d, "p_gb_min_on_kW", c.dispatch.p_gb_min_on);
      read_opt(d, "terminal_energy_min_kWh", c.dispatch.terminal_energy_min);
      read_opt(d, "model_loss_k_per_h", c.dispatch.model_loss_k);
    }
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      check_keys(s, "solver", {"feas_tol", "int_tol", "max_iterations", "max_nodes", "mip_gap"});
      read(s, "feas_tol", c.solver.feas_tol);
      read(s, "int_tol", c.solver.int_tol);
      read(s, "max_iterations", c.solver.max_iterations);
      read(s, "max_nodes", c.solver.max_nodes);
      read(s, "mip_gap", c.solver.mip_gap);
    }
    if (j.contains("data")) {
      const auto& d = j.at("data");
      check_keys(d, "data", {"mode", "solar_area_ref_m2", "synthetic", "csv"});
      if (d.contains("mode")) {
        const auto m = d.at("mode").get<std::string>();
        if (m == "synthetic") c.data.mode = DataConfig::Mode::synthetic;
        else if (m == "csv") c.data.mode = DataConfig::Mode::csv;
        else throw Error(Errc::ConfigInvalid, "data.mode must be synthetic or csv");
      }
      read(d, "solar_area_ref_m2", c.data.solar_area_ref);
      if (d.contains("synthetic")) {
        const auto& s = d.at("synthetic");
        check_keys(s, "data.synthetic",
                   {"load_peak_kW", "load_noise", "irradiance_peak_W_per_m2", "irradiance_noise",
                    "ambient_peak_degC", "ambient_noise", "price_peak_eur_per_kWh", "price_noise",
                    "price_fixed_eur_per_kWh", "collector_eta0", "collector_u_W_per_m2K", "collector_temp_degC",
                    "forecast_noise", "training_days"});
        auto& sd = c.data.synthetic;
        read(s, "load_peak_kW", sd.load_peak);
        read(s, "load_noise", sd.load_noise);
        read(s, "irradiance_peak_W_per_m2", sd.irradiance_peak);
        read(s, "irradiance_noise", sd.irradiance_noise);
        read(s, "ambient_peak_degC", sd.ambient_peak);
        read(s, "ambient_noise", sd.ambient_noise);
        read(s, "price_peak_eur_per_kWh", sd.price_peak);
        read(s, "price_noise", sd.price_noise);
        read(s, "price_fixed_eur_per_kWh", sd.price_fixed);
        read(s, "collector_eta0", sd.collector_eta0);
        read(s, "collector_u_W_per_m2K", sd.collector_u);
        read(s, "collector_temp_degC", sd.collector_temp);
        read(s, "forecast_noise", sd.forecast_noise);
        read(s, "training_days", sd.training_days);
      }
      if (d.contains("csv")) {
        const auto& s = d.at("csv");
        check_keys(s, "data.csv", {"timeseries", "weather", "solar_fit"});
        read(s, "timeseries", c.data.csv.timeseries);
        read(s, "weather", c.data.csv.weather);
        if (s.contains("solar_fit") && !s.at("solar_fit").is_null())
          c.data.csv.solar_fit = coeff_from(s.at("solar_fit"));
      }
    }
    if (j.contains("debug")) {
      const auto& d = j.at("debug");
      check_keys(d, "debug", {"dump_dir", "dump_steps"});
      read(d, "dump_dir", c.dump_dir);
      read(d, "dump_steps", c.dump_steps);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigInvalid) throw;
    throw Error(Errc::ConfigInvalid, e.what());
  }
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto c = config_from_json(ss.str());
  // Relative CSV paths resolve against the config file's directory.
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative())
      p = (path.parent_path() / p).lexically_normal().string();
  };
  resolve(c.data.csv.timeseries);
  resolve(c.data.csv.weather);
  return c;
}

void save_config(const ScenarioConfig& config, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << config_to_json(config);
}

std::string coefficients_to_json(const SolarFitCoefficients& c) {
  return coeff_json(c).dump(2) + "\n";
}

SolarFitCoefficients coefficients_from_json(const std::string& text) {
  try {
    return coeff_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("bad coefficient file: ") + e.what());
  }
}

}  // namespace dhtwin
