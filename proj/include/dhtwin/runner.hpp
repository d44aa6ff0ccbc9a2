#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dhtwin/config.hpp"
#include "dhtwin/kernels.hpp"

namespace dhtwin {

// Input series for one run, all on the control grid starting at the
// period start. `solar_actual` and `solar_predicted` are already scaled to
// the scenario's collector area.
struct ScenarioData {
  TimeSeries load;
  TimeSeries solar_actual;
  TimeSeries elec_price;
  TimeSeries solar_predicted;
  std::optional<TimeSeries> irradiance;
  std::optional<TimeSeries> ambient;
  std::optional<SolarFitCoefficients> fit;
};

/// Builds (synthetic) or loads (csv) the inputs a config asks for.
/// Throws DataExhausted when the series do not cover the period plus the
/// MPC lookahead.
ScenarioData prepare_data(const ScenarioConfig& config);

struct KpiReport {
  std::string scenario;
  std::string controller;
  Timestamp period_start = 0;
  Timestamp period_end = 0;
  long steps = 0;

  double total_cost = 0.0;  // eur
  double cost_gas = 0.0;
  double cost_elec = 0.0;
  double energy_total = 0.0;  // kWh
  double energy_gb = 0.0;
  double energy_hp = 0.0;
  double energy_solar = 0.0;
  double share_gb = 0.0;
  double share_hp = 0.0;
  double share_solar = 0.0;
  double curtailed = 0.0;
  double unmet = 0.0;
  long fallbacks = 0;
  double runtime_seconds = 0.0;
};

struct StepRow {
  Timestamp timestamp;
  StepRecord record;
  double elec_price;
};

struct DecisionRow {
  Timestamp timestamp;
  ControlAction action;
  std::string solver_status;  // "none" for RBC
  long solver_iterations = 0;
  std::optional<double> planned_cost;
};

struct RunResult {
  KpiReport kpi;
  std::vector<StepRow> steps;
  std::vector<DecisionRow> decisions;
  double initial_energy = 0.0;
  double final_energy = 0.0;
};

/// Closed loop over the period: measure, decide, step the plant with the
/// actual inputs, account costs on the applied powers.
RunResult run_scenario(const ScenarioConfig& config, const ScenarioData& data);
RunResult run_scenario(const ScenarioConfig& config);

/// Independent runs; results are in input order and identical for every
/// execution policy.
std::vector<RunResult> run_batch(const std::vector<ScenarioConfig>& configs,
                                 kernels::Exec exec);

struct OpenLoopResult {
  LpSolution solution;
  std::optional<DispatchPlan> plan;
  RunResult replay;  // the plan applied to the plant with actual inputs
};

/// One dispatch over the whole period from the initial state; a lower bound
/// for any causal controller when the forecast is perfect.
OpenLoopResult run_open_loop(const ScenarioConfig& config, const ScenarioData& data);

// --- KPIs and comparison ---------------------------------------------------

void finalize_shares(KpiReport& k);

std::string kpi_to_text(const KpiReport& k, bool include_runtime = false);
KpiReport kpi_from_text(const std::string& text);
KpiReport read_kpi_file(const std::filesystem::path& path);

struct IndicatorDelta {
  std::string name;
  double a = 0.0;
  double b = 0.0;
  double relative = 0.0;  // (b - a) / a, or b - a when flagged
  bool absolute = false;  // reference value was zero
};

struct ComparisonReport {
  std::vector<IndicatorDelta> indicators;
  const IndicatorDelta& at(std::string_view name) const;
};

/// Throws PeriodMismatch unless both reports cover the same period.
ComparisonReport compare(const KpiReport& a, const KpiReport& b);
std::string comparison_to_csv(const ComparisonReport& r);

/// Re-derives the cost and energy totals from an exported step CSV.
KpiReport recompute_kpis(const std::filesystem::path& steps_csv, double cop, double gas_price);

// --- files -----------------------------------------------------------------

void write_steps_csv(const RunResult& r, const std::filesystem::path& path);
void write_decisions_csv(const RunResult& r, const std::filesystem::path& path);

/// config.json, steps.csv, decisions.csv, kpi.txt under `dir`.
void write_run(const ScenarioConfig& config, const RunResult& r,
               const std::filesystem::path& dir, bool include_runtime = false);

/// Plot-ready production.csv, storage.csv and prices.csv from a run dir.
void write_report(const std::filesystem::path& run_dir);

}  // namespace dhtwin
