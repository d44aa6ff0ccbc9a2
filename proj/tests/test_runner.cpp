#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <functional>

#include "dhtwin/config.hpp"
#include "dhtwin/error.hpp"
#include "dhtwin/runner.hpp"
#include "test_util.hpp"

using namespace dhtwin;
using dhtwin::testing::TempDir;

namespace {

ScenarioConfig short_run(const char* name, ControllerKind c, int days) {
  auto cfg = builtin_scenario(name);
  cfg.controller = c;
  cfg.period_end = cfg.period_start + days * 86400;
  return cfg;
}

KpiReport report(double total, double solar) {
  KpiReport k;
  k.period_start = 0;
  k.period_end = 3600;
  k.steps = 2;
  k.cost_gas = total / 2;
  k.cost_elec = total / 2;
  k.total_cost = total;
  k.energy_solar = solar;
  return k;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no dhtwin::Error thrown";
  return Errc::InvalidArgument;
}

void expect_identities(const KpiReport& k) {
  EXPECT_NEAR(k.cost_gas + k.cost_elec, k.total_cost, 1e-9 * std::max(1.0, k.total_cost));
  EXPECT_EQ(k.energy_gb + k.energy_hp + k.energy_solar, k.energy_total);
  if (k.energy_total > 0) EXPECT_NEAR(k.share_gb + k.share_hp + k.share_solar, 1.0, 1e-9);
}

}  // namespace

TEST(Builtins, TableSizings) {
  const auto all = builtin_scenarios();
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(all[0].plant.p_gb_max, 200.0);
  EXPECT_EQ(all[0].plant.p_hp_max, 50.0);
  EXPECT_EQ(all[1].plant.p_hp_max, 70.0);
  EXPECT_EQ(all[1].plant.p_gb_max, 180.0);
  EXPECT_EQ(all[2].plant.solar_area, 35.0);
  EXPECT_EQ(all[2].plant.solar_area, all[0].plant.solar_area / 2);
  for (const auto& c : all) {
    EXPECT_EQ(c.plant.e_min, all[0].plant.e_min);
    EXPECT_EQ(c.plant.e_max, all[0].plant.e_max);
    EXPECT_NEAR(c.plant.e_max, 930.2, 0.1);
    EXPECT_EQ(c.plant.cop, 3.0);
    EXPECT_EQ(c.gas_price, 0.065);
    EXPECT_EQ(c.period_steps(), 4128u);
  }
  EXPECT_EQ(code_of([] { builtin_scenario("X"); }), Errc::ConfigInvalid);
}

TEST(Config, JsonRoundTripAndUnknownKeys) {
  auto c = builtin_scenario("B");
  c.plant.ramp_hp = 25.0;
  c.dispatch.terminal_energy_min = 300.0;
  c.seed = 99;
  c.dump_steps = {1, 5};
  const auto text = config_to_json(c);
  const auto back = config_from_json(text);
  EXPECT_EQ(config_to_json(back), text);
  EXPECT_EQ(back.plant, c.plant);
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.dispatch.terminal_energy_min, 300.0);
  EXPECT_EQ(code_of([] { config_from_json(R"({"name": "A", "bogus": 1})"); }),
            Errc::ConfigInvalid);
}

TEST(Config, ShippedScenarioFilesMatchBuiltins) {
  const std::filesystem::path dir = DHTWIN_SCENARIO_DIR;
  for (const char* name : {"A", "B", "C"})
    EXPECT_EQ(config_to_json(load_config(dir / (std::string(name) + ".json"))),
              config_to_json(builtin_scenario(name)))
        << name;
  const auto year = load_config(dir / "year365.json");
  EXPECT_EQ(year.controller, ControllerKind::MPC);
  EXPECT_EQ(year.period_end - year.period_start, 365 * 86400);
}

TEST(RunScenario, IdleSystemStaysConstant) {
  auto cfg = builtin_scenario("A");
  cfg.plant.loss_k = 0.0;
  cfg.period_end = cfg.period_start + 10 * 1800;
  const TimeGrid g(cfg.period_start, 0.5, 10);
  const TimeSeries zero(g, std::vector<double>(10, 0.0), Unit::kW);
  const TimeSeries price(g, std::vector<double>(10, 0.1), Unit::eur_per_kWh);
  const ScenarioData data{zero, zero, price, zero, std::nullopt, std::nullopt, std::nullopt};
  const auto r = run_scenario(cfg, data);
  EXPECT_EQ(r.steps.size(), 10u);
  EXPECT_EQ(r.kpi.total_cost, 0.0);
  EXPECT_EQ(r.kpi.energy_total, 0.0);
  EXPECT_EQ(r.final_energy, r.initial_energy);
}

TEST(RunScenario, DataExhausted) {
  auto cfg = short_run("A", ControllerKind::MPC, 1);
  const TimeGrid g(cfg.period_start, 0.5, 50);  // 48 + 48 needed
  const TimeSeries s(g, std::vector<double>(50, 1.0), Unit::kW);
  const ScenarioData data{s, s, s, s, std::nullopt, std::nullopt, std::nullopt};
  EXPECT_EQ(code_of([&] { run_scenario(cfg, data); }), Errc::DataExhausted);
}

TEST(RunScenario, FullRbcBenchmarkEmits4128Records) {
  const auto r = run_scenario(builtin_scenario("A"));
  EXPECT_EQ(r.steps.size(), 4128u);
  EXPECT_EQ(r.decisions.size(), 4128u);
  expect_identities(r.kpi);
  EXPECT_GT(r.kpi.energy_solar, 0.0);
}

TEST(RunScenario, MpcWithoutFallbacks) {
  const auto r = run_scenario(short_run("A", ControllerKind::MPC, 5));
  EXPECT_EQ(r.kpi.fallbacks, 0);
  for (const auto& d : r.decisions) {
    EXPECT_EQ(d.action.origin, ActionOrigin::MPC);
    EXPECT_EQ(d.solver_status, "Optimal");
    EXPECT_TRUE(d.planned_cost.has_value());
  }
  expect_identities(r.kpi);
}

TEST(RunScenario, KpiClosureAgainstExportedCsv) {
  TempDir dir;
  for (auto kind : {ControllerKind::RBC, ControllerKind::MPC}) {
    const auto cfg = short_run("C", kind, 4);
    const auto r = run_scenario(cfg);
    write_run(cfg, r, dir.path());
    const auto k = recompute_kpis(dir / "steps.csv", cfg.plant.cop, cfg.gas_price);
    EXPECT_NEAR(k.total_cost, r.kpi.total_cost, 1e-9 * r.kpi.total_cost);
    EXPECT_NEAR(k.energy_total, r.kpi.energy_total, 1e-9 * r.kpi.energy_total);
    EXPECT_EQ(k.period_start, r.kpi.period_start);
    EXPECT_EQ(k.period_end, r.kpi.period_end);
    const auto back = read_kpi_file(dir / "kpi.txt");
    EXPECT_EQ(back.total_cost, r.kpi.total_cost);
    EXPECT_EQ(back.share_solar, r.kpi.share_solar);
    EXPECT_EQ(back.controller, controller_name(kind));
  }
}

// Seeds change the data, never the accounting identities.
TEST(RunScenario, SeedChangesDataNotIdentities) {
  auto a = short_run("A", ControllerKind::RBC, 10);
  auto b = a;
  b.seed = a.seed + 1;
  const auto ra = run_scenario(a), rb = run_scenario(b);
  EXPECT_NE(ra.kpi.total_cost, rb.kpi.total_cost);
  expect_identities(ra.kpi);
  expect_identities(rb.kpi);
}

TEST(RunScenario, Deterministic) {
  const auto cfg = short_run("B", ControllerKind::MPC, 2);
  TempDir d1, d2;
  write_run(cfg, run_scenario(cfg), d1.path());
  write_run(cfg, run_scenario(cfg), d2.path());
  for (const char* f : {"config.json", "steps.csv", "decisions.csv", "kpi.txt"})
    EXPECT_EQ(dhtwin::testing::read_file(d1 / f), dhtwin::testing::read_file(d2 / f)) << f;
}

TEST(RunBatch, ParallelMatchesSerial) {
  std::vector<ScenarioConfig> cfgs;
  for (const char* n : {"A", "B", "C"})
    for (auto kind : {ControllerKind::RBC, ControllerKind::MPC}) cfgs.push_back(short_run(n, kind, 2));
  const auto s = run_batch(cfgs, kernels::Exec::serial);
  const auto p = run_batch(cfgs, kernels::Exec::parallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].kpi.total_cost, p[i].kpi.total_cost);
    EXPECT_EQ(s[i].kpi.scenario, cfgs[i].name);
    EXPECT_EQ(s[i].final_energy, p[i].final_energy);
  }
  auto bad = cfgs;
  bad[3].period_end = bad[3].period_start;
  EXPECT_THROW(run_batch(bad, kernels::Exec::parallel), Error);
}

TEST(OpenLoop, LowerBoundsClosedLoopWithPerfectForecast) {
  auto cfg = short_run("A", ControllerKind::MPC, 3);
  cfg.perfect_forecast = true;
  const auto data = prepare_data(cfg);
  const auto ol = run_open_loop(cfg, data);
  ASSERT_EQ(ol.solution.status, LpStatus::Optimal);
  const auto mpc = run_scenario(cfg, data);
  EXPECT_LE(ol.replay.kpi.total_cost, mpc.kpi.total_cost + 1e-9 * mpc.kpi.total_cost);
  EXPECT_NEAR(ol.replay.kpi.total_cost, ol.solution.objective_value,
              1e-6 * ol.solution.objective_value);
}

TEST(Compare, Examples) {
  const auto same = compare(report(100, 5), report(100, 5));
  for (const auto& d : same.indicators) EXPECT_EQ(d.relative, 0.0) << d.name;
  const auto c = compare(report(100, 5), report(95.4, 5));
  EXPECT_NEAR(100 * c.at("total_cost").relative, -4.6, 1e-12);
  const auto z = compare(report(100, 0), report(100, 3));
  EXPECT_TRUE(z.at("energy_solar").absolute);
  EXPECT_EQ(z.at("energy_solar").relative, 3.0);
  const auto csv = comparison_to_csv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "indicator,value_a,value_b,relative_diff_percent,flag");
  auto other = report(100, 5);
  other.period_end += 1800;
  EXPECT_EQ(code_of([&] { compare(report(100, 5), other); }), Errc::PeriodMismatch);
}

TEST(Report, PlotReadyFiles) {
  TempDir dir;
  const auto cfg = short_run("A", ControllerKind::RBC, 1);
  write_run(cfg, run_scenario(cfg), dir.path());
  write_report(dir.path());
  for (const char* f : {"production.csv", "storage.csv", "prices.csv"}) {
    const auto t = read_csv_table(dir / f);
    EXPECT_EQ(t.columns.at(0).size(), 48u) << f;
  }
}
