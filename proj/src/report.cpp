#include <fstream>

#include "dhtwin/error.hpp"
#include "dhtwin/runner.hpp"

namespace dhtwin {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace

void write_steps_csv(const RunResult& r, const std::filesystem::path& path) {
  std::string s =
      "timestamp,p_hp_kW,p_gb_kW,p_solar_kW,p_consumer_kW,energy_kWh,curtailed_kWh,unmet_kWh,"
      "elec_price_eur_per_kWh\n";
  for (const auto& row : r.steps) {
    const auto& x = row.record;
    s += format_iso8601(row.timestamp);
    for (double v : {x.p_hp_applied, x.p_gb_applied, x.p_solar_applied, x.p_consumer,
                     x.energy_after, x.curtailed, x.unmet, row.elec_price}) {
      s += ',';
      s += format_double(v);
    }
    s += '\n';
  }
  write_file(path, s);
}

void write_decisions_csv(const RunResult& r, const std::filesystem::path& path) {
  std::string s =
      "timestamp,origin,p_hp_set_kW,p_gb_set_kW,solver_status,solver_iterations,"
      "planned_cost_eur\n";
  for (const auto& d : r.decisions) {
    s += format_iso8601(d.timestamp) + "," + std::string(origin_name(d.action.origin)) + "," +
         format_double(d.action.p_hp_set) + "," + format_double(d.action.p_gb_set) + "," +
         d.solver_status + "," + std::to_string(d.solver_iterations) + "," +
         (d.planned_cost ? format_double(*d.planned_cost) : std::string()) + "\n";
  }
  write_file(path, s);
}

void write_run(const ScenarioConfig& config, const RunResult& r, const std::filesystem::path& dir,
               bool include_runtime) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  save_config(config, dir / "config.json");
  write_steps_csv(r, dir / "steps.csv");
  write_decisions_csv(r, dir / "decisions.csv");
  write_file(dir / "kpi.txt", kpi_to_text(r.kpi, include_runtime));
}

void write_report(const std::filesystem::path& run_dir) {
  const auto config = load_config(run_dir / "config.json");
  const auto t = read_csv_table(run_dir / "steps.csv");
  const auto& hp = t.column("p_hp_kW");
  const auto& gb = t.column("p_gb_kW");
  const auto& solar = t.column("p_solar_kW");
  const auto& load = t.column("p_consumer_kW");
  const auto& energy = t.column("energy_kWh");
  const auto& price = t.column("elec_price_eur_per_kWh");
  const double dt = hp.grid().step_hours();

  const NamedColumn production[] = {
      {"p_hp_kW", &hp}, {"p_gb_kW", &gb}, {"p_solar_kW", &solar}, {"p_consumer_kW", &load}};
  write_csv(production, run_dir / "production.csv");

  std::vector<double> charge(energy.size());
  double prev = config.start_energy();
  for (std::size_t i = 0; i < energy.size(); ++i) {
    charge[i] = (energy[i] - prev) / dt;
    prev = energy[i];
  }
  const TimeSeries charge_s(energy.grid(), std::move(charge), Unit::kW);
  const NamedColumn storage[] = {{"energy_kWh", &energy}, {"charge_kW", &charge_s}};
  write_csv(storage, run_dir / "storage.csv");

  std::vector<double> hp_heat(price.size());
  std::vector<double> gas(price.size(), config.gas_price);
  for (std::size_t i = 0; i < price.size(); ++i) hp_heat[i] = price[i] / config.plant.cop;
  const TimeSeries hp_s(price.grid(), std::move(hp_heat), Unit::eur_per_kWh);
  const TimeSeries gas_s(price.grid(), std::move(gas), Unit::eur_per_kWh);
  const NamedColumn prices[] = {{"elec_price_eur_per_kWh", &price},
                                {"hp_heat_cost_eur_per_kWh", &hp_s},
                                {"gas_price_eur_per_kWh", &gas_s}};
  write_csv(prices, run_dir / "prices.csv");
}

}  // namespace dhtwin
