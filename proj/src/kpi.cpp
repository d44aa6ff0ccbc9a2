#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dhtwin/error.hpp"
#include "dhtwin/runner.hpp"

namespace dhtwin {

void finalize_shares(KpiReport& k) {
  k.total_cost = k.cost_gas + k.cost_elec;
  k.energy_total = k.energy_gb + k.energy_hp + k.energy_solar;
  if (k.energy_total > 0.0) {
    k.share_gb = k.energy_gb / k.energy_total;
    k.share_hp = k.energy_hp / k.energy_total;
    k.share_solar = k.energy_solar / k.energy_total;
  } else {
    k.share_gb = k.share_hp = k.share_solar = 0.0;
  }
}

std::string kpi_to_text(const KpiReport& k, bool include_runtime) {
  std::string s;
  auto put = [&](const char* key, const std::string& v) { s += std::string(key) + "=" + v + "\n"; };
  auto num = [&](const char* key, double v) { put(key, format_double(v)); };
  put("scenario", k.scenario);
  put("controller", k.controller);
  put("period_start", format_iso8601(k.period_start));
  put("period_end", format_iso8601(k.period_end));
  put("steps", std::to_string(k.steps));
  num("total_cost_eur", k.total_cost);
  num("cost_gas_eur", k.cost_gas);
  num("cost_elec_eur", k.cost_elec);
  num("energy_total_kWh", k.energy_total);
  num("energy_gb_kWh", k.energy_gb);
  num("energy_hp_kWh", k.energy_hp);
  num("energy_solar_kWh", k.energy_solar);
  num("share_gb", k.share_gb);
  num("share_hp", k.share_hp);
  num("share_solar", k.share_solar);
  num("curtailed_kWh", k.curtailed);
  num("unmet_kWh", k.unmet);
  put("mpc_fallbacks", std::to_string(k.fallbacks));
  if (include_runtime) num("runtime_seconds", k.runtime_seconds);
  return s;
}

KpiReport kpi_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::ParseError, "KPI line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw Error(Errc::ParseError, std::string("KPI file lacks ") + key);
    return it->second;
  };
  auto num = [&](const char* key) {
    try {
      return std::stod(get(key));
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, std::string("bad number for ") + key);
    }
  };
  KpiReport k;
  k.scenario = get("scenario");
  k.controller = get("controller");
  k.period_start = parse_iso8601(get("period_start"));
  k.period_end = parse_iso8601(get("period_end"));
  k.steps = std::stol(get("steps"));
  k.total_cost = num("total_cost_eur");
  k.cost_gas = num("cost_gas_eur");
  k.cost_elec = num("cost_elec_eur");
  k.energy_total = num("energy_total_kWh");
  k.energy_gb = num("energy_gb_kWh");
  k.energy_hp = num("energy_hp_kWh");
  k.energy_solar = num("energy_solar_kWh");
  k.share_gb = num("share_gb");
  k.share_hp = num("share_hp");
  k.share_solar = num("share_solar");
  k.curtailed = num("curtailed_kWh");
  k.unmet = num("unmet_kWh");
  if (kv.count("mpc_fallbacks")) k.fallbacks = std::stol(kv["mpc_fallbacks"]);
  if (kv.count("runtime_seconds")) k.runtime_seconds = std::stod(kv["runtime_seconds"]);
  return k;
}

KpiReport read_kpi_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return kpi_from_text(ss.str());
}

const IndicatorDelta& ComparisonReport::at(std::string_view name) const {
  for (const auto& d : indicators)
    if (d.name == name) return d;
  throw Error(Errc::InvalidArgument, "no indicator " + std::string(name));
}

ComparisonReport compare(const KpiReport& a, const KpiReport& b) {
  if (a.period_start != b.period_start || a.period_end != b.period_end || a.steps != b.steps)
    throw Error(Errc::PeriodMismatch, "reports cover different periods (" +
                                          format_iso8601(a.period_start) + ".." +
                                          format_iso8601(a.period_end) + " vs " +
                                          format_iso8601(b.period_start) + ".." +
                                          format_iso8601(b.period_end) + ")");
  ComparisonReport r;
  auto add = [&](const char* name, double va, double vb) {
    IndicatorDelta d{name, va, vb, 0.0, false};
    if (va != 0.0) {
      d.relative = (vb - va) / va;
    } else {
      d.relative = vb - va;
      d.absolute = true;
    }
    r.indicators.push_back(d);
  };
  add("total_cost", a.total_cost, b.total_cost);
  add("cost_gas", a.cost_gas, b.cost_gas);
  add("cost_elec", a.cost_elec, b.cost_elec);
  add("energy_total", a.energy_total, b.energy_total);
  add("energy_gb", a.energy_gb, b.energy_gb);
  add("energy_hp", a.energy_hp, b.energy_hp);
  add("energy_solar", a.energy_solar, b.energy_solar);
  add("share_gb", a.share_gb, b.share_gb);
  add("share_hp", a.share_hp, b.share_hp);
  add("share_solar", a.share_solar, b.share_solar);
  add("curtailed", a.curtailed, b.curtailed);
  add("unmet", a.unmet, b.unmet);
  return r;
}

std::string comparison_to_csv(const ComparisonReport& r) {
  std::string s = "indicator,value_a,value_b,relative_diff_percent,flag\n";
  for (const auto& d : r.indicators) {
    s += d.name + "," + format_double(d.a) + "," + format_double(d.b) + ",";
    s += d.absolute ? "" : format_double(100.0 * d.relative);
    s += d.absolute ? ",absolute_delta:" + format_double(d.relative) : ",";
    s += "\n";
  }
  return s;
}

KpiReport recompute_kpis(const std::filesystem::path& steps_csv, double cop, double gas_price) {
  const auto t = read_csv_table(steps_csv);
  const auto& hp = t.column("p_hp_kW");
  const auto& gb = t.column("p_gb_kW");
  const auto& solar = t.column("p_solar_kW");
  const auto& price = t.column("elec_price_eur_per_kWh");
  const auto& curtailed = t.column("curtailed_kWh");
  const auto& unmet = t.column("unmet_kWh");
  const double dt = hp.grid().step_hours();
  KpiReport k;
  for (std::size_t i = 0; i < hp.size(); ++i) {
    k.cost_elec += dt * price[i] * hp[i] / cop;
    k.cost_gas += dt * gas_price * gb[i];
    k.energy_hp += dt * hp[i];
    k.energy_gb += dt * gb[i];
    k.energy_solar += dt * solar[i];
    k.curtailed += curtailed[i];
    k.unmet += unmet[i];
  }
  k.period_start = hp.grid().start();
  k.period_end = hp.grid().end();
  k.steps = static_cast<long>(hp.size());
  finalize_shares(k);
  return k;
}

}  // namespace dhtwin
