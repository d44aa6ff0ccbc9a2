// dhtwin: command-line front end for the district-heating twin.
//
//   dhtwin simulate --scenario <A|B|C|config.json> --controller <rbc|mpc> --out <dir>
//                   [--seed N] [--perfect-forecast] [--commitment] [--days N] [--timing]
//   dhtwin compare <kpi_a> <kpi_b> --out <file>
//   dhtwin fit-solar --irradiance <csv> --ambient <csv> --production <csv> --out <file>
//   dhtwin gen-data --spec <A|B|C|config.json> --out <dir>
//   dhtwin report --run <dir>
//
// Exit codes: 0 success, 1 usage error, 2 runtime error. Diagnostics go to
// stderr; results go to files only.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "dhtwin/config.hpp"
#include "dhtwin/error.hpp"
#include "dhtwin/runner.hpp"

namespace fs = std::filesystem;
using namespace dhtwin;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ScenarioConfig resolve_scenario(const std::string& name) {
  if (name == "A" || name == "B" || name == "C") return builtin_scenario(name);
  if (fs::is_regular_file(name)) return load_config(name);
  throw UsageError("unknown scenario '" + name + "' (expected A, B, C or a config file)");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"District-heating digital twin with rule-based and MPC controllers"};
  app.require_subcommand(1);

  std::string scenario, controller, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> days;
  bool perfect = false, commitment = false, timing = false;
  auto* sim = app.add_subcommand("simulate", "Run one closed-loop scenario");
  sim->add_option("--scenario", scenario, "A, B, C or a scenario JSON file")->required();
  sim->add_option("--controller", controller, "rbc or mpc")
      ->required()
      ->check(CLI::IsMember({"rbc", "mpc"}));
  sim->add_option("--out", out, "Output directory")->required();
  sim->add_option("--seed", seed, "Synthetic data seed");
  sim->add_option("--days", days, "Shorten the period to N days")->check(CLI::PositiveNumber);
  sim->add_flag("--perfect-forecast", perfect, "Give the MPC the actual solar series");
  sim->add_flag("--commitment", commitment, "Add on/off binaries with minimum load (MILP)");
  sim->add_flag("--timing", timing, "Record runtime_seconds in kpi.txt");

  std::string kpi_a, kpi_b, cmp_out;
  auto* cmp = app.add_subcommand("compare", "Relative KPI differences (b - a) / a");
  cmp->add_option("kpi_a", kpi_a, "Reference kpi.txt")->required();
  cmp->add_option("kpi_b", kpi_b, "Compared kpi.txt")->required();
  cmp->add_option("--out", cmp_out, "Output CSV")->required();

  std::string irr, amb, prod, coeff_out;
  auto* fit = app.add_subcommand("fit-solar", "Least-squares solar correlation");
  fit->add_option("--irradiance", irr, "CSV, W_per_m2")->required();
  fit->add_option("--ambient", amb, "CSV, degC")->required();
  fit->add_option("--production", prod, "CSV, kW")->required();
  fit->add_option("--out", coeff_out, "Coefficient JSON")->required();

  std::string spec, gen_out;
  auto* gen = app.add_subcommand("gen-data", "Write the synthetic inputs of a scenario");
  gen->add_option("--spec", spec, "A, B, C or a scenario JSON file")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();

  std::string run_dir;
  auto* rep = app.add_subcommand("report", "Plot-ready CSVs from a run directory");
  rep->add_option("--run", run_dir, "Run directory written by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cerr << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (sim->parsed()) {
      auto cfg = resolve_scenario(scenario);
      cfg.controller = parse_controller(controller);
      if (seed) cfg.seed = *seed;
      if (perfect) cfg.perfect_forecast = true;
      if (commitment) cfg.dispatch.use_commitment = true;
      if (days) cfg.period_end = cfg.period_start + static_cast<Timestamp>(*days) * 86400;
      const auto result = run_scenario(cfg);
      write_run(cfg, result, out, timing);
      std::cerr << cfg.name << "/" << controller << ": " << result.kpi.steps
                << " steps, total cost " << format_double(result.kpi.total_cost) << " eur, "
                << result.kpi.fallbacks << " fallbacks, " << result.kpi.runtime_seconds << " s\n";
    } else if (cmp->parsed()) {
      const auto report = compare(read_kpi_file(kpi_a), read_kpi_file(kpi_b));
      write_text(cmp_out, comparison_to_csv(report));
    } else if (fit->parsed()) {
      const auto c = fit_solar(read_csv(irr, Unit::W_per_m2), read_csv(amb, Unit::degC),
                               read_csv(prod, Unit::kW));
      write_text(coeff_out, coefficients_to_json(c));
    } else if (gen->parsed()) {
      auto cfg = resolve_scenario(spec);
      const auto d = prepare_data(cfg);
      const fs::path dir = gen_out;
      fs::create_directories(dir);
      const NamedColumn plant[] = {{"load_kW", &d.load},
                                   {"solar_kW", &d.solar_actual},
                                   {"price_eur_per_kWh", &d.elec_price}};
      write_csv(plant, dir / "timeseries.csv");
      write_csv(d.solar_actual, dir / "solar.csv");
      write_csv(d.solar_predicted, dir / "solar_predicted.csv");
      if (d.irradiance && d.ambient) {
        const NamedColumn weather[] = {{"irradiance_W_per_m2", &*d.irradiance},
                                       {"ambient_degC", &*d.ambient}};
        write_csv(weather, dir / "weather.csv");
        write_csv(*d.irradiance, dir / "irradiance.csv");
        write_csv(*d.ambient, dir / "ambient.csv");
      }
      if (d.fit) write_text(dir / "solar_fit.json", coefficients_to_json(*d.fit));
    } else if (rep->parsed()) {
      write_report(run_dir);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
