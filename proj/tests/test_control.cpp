#include <gtest/gtest.h>

#include <random>

#include "dhtwin/control.hpp"

using namespace dhtwin;

namespace {

const Timestamp kT0 = parse_iso8601("2017-10-01T00:00:00Z");

PlantParams plant() {
  auto p = PlantParams::defaults();
  p.e_max = 1000.0;
  p.e_min = 200.0;
  p.e_curtail = 950.0;
  return p;
}

RbcParams rbc(double e_min = 200.0) {
  RbcParams r;
  r.e_min = e_min;
  return r;
}

ForecastBundle flat_bundle(std::size_t n, double load, double solar, double price) {
  const TimeGrid g(kT0, 0.5, n);
  return {TimeSeries(g, std::vector<double>(n, load), Unit::kW),
          TimeSeries(g, std::vector<double>(n, solar), Unit::kW),
          TimeSeries(g, std::vector<double>(n, price), Unit::eur_per_kWh), 0.065};
}

}  // namespace

TEST(Rbc, HeatPumpCoversBaseLoad) {
  const auto a = rbc_decide({500.0, 30.0}, plant(), rbc());
  EXPECT_EQ(a.p_hp_set, 30.0);
  EXPECT_EQ(a.p_gb_set, 0.0);
  EXPECT_EQ(a.origin, ActionOrigin::RBC);
}

TEST(Rbc, RestoreTermAddsBoiler) {
  const auto a = rbc_decide({100.0, 120.0}, plant(), rbc());
  EXPECT_EQ(a.p_hp_set, 50.0);
  EXPECT_EQ(a.p_gb_set, 120.0);  // target 120 + 0.5*(200-100) = 170
}

TEST(Rbc, SolarSurplusMeansIdle) {
  const auto a = rbc_decide({500.0, -20.0}, plant(), rbc());
  EXPECT_EQ(a.p_hp_set, 0.0);
  EXPECT_EQ(a.p_gb_set, 0.0);
}

TEST(Rbc, CapKeepsProjectionBelowCapacity) {
  // 990 kWh, net load 40: restore asks 40 + 10*(995-990) = 90 kW, the cap
  // allows 40 + (1000-990)/0.5 = 60 kW.
  auto r = rbc(995.0);
  r.k_restore = 10.0;
  const auto a = rbc_decide({990.0, 40.0}, plant(), r);
  EXPECT_DOUBLE_EQ(a.p_hp_set + a.p_gb_set, 60.0);
  r.cap_to_capacity = false;
  const auto b = rbc_decide({990.0, 40.0}, plant(), r);
  EXPECT_DOUBLE_EQ(b.p_hp_set + b.p_gb_set, 90.0);
}

TEST(Rbc, PropertiesOverRandomMeasurements) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto p = plant();
  const auto r = rbc();
  for (int i = 0; i < 10000; ++i) {
    const Measurement m{p.e_max * u(gen), 400.0 * u(gen) - 100.0};
    const auto a = rbc_decide(m, p, r);
    EXPECT_GE(a.p_hp_set, 0.0);
    EXPECT_GE(a.p_gb_set, 0.0);
    EXPECT_LE(a.p_hp_set, p.p_hp_max);
    EXPECT_LE(a.p_gb_set, p.p_gb_max);
    if (a.p_gb_set > 0.0) EXPECT_EQ(a.p_hp_set, p.p_hp_max);
    EXPECT_EQ(a, rbc_decide(m, p, r));
    const Measurement higher{std::min(p.e_max, m.energy + 50.0 * u(gen)), m.net_load};
    const auto b = rbc_decide(higher, p, r);
    EXPECT_LE(b.p_hp_set + b.p_gb_set, a.p_hp_set + a.p_gb_set + 1e-12);
  }
}

TEST(Mpc, FeasibilityForcesFirstStepProduction) {
  auto p = plant();
  p.loss_k = 0.0;
  PlantState s;
  s.energy = p.e_min;
  const auto bundle = flat_bundle(48, 60.0, 10.0, 0.15);
  DispatchConfig cfg;
  const auto d = mpc_decide({s.energy, 50.0}, s, bundle, p, cfg, {}, rbc());
  EXPECT_EQ(d.action.origin, ActionOrigin::MPC);
  ASSERT_TRUE(d.plan.has_value());
  EXPECT_GE(d.action.p_hp_set + d.action.p_gb_set, 50.0 - 1e-7);
  EXPECT_EQ(d.status, LpStatus::Optimal);
}

TEST(Mpc, InfeasibleConfigFallsBackToRbc) {
  auto p = plant();
  p.e_min = p.e_max + 100.0;  // injected inconsistency
  PlantState s;
  s.energy = 500.0;
  const Measurement m{s.energy, 70.0};
  const auto r = rbc();
  const auto d = mpc_decide(m, s, flat_bundle(48, 70.0, 0.0, 0.15), p, {}, {}, r);
  EXPECT_EQ(d.action.origin, ActionOrigin::MPC_FALLBACK);
  EXPECT_FALSE(d.plan.has_value());
  auto expected = rbc_decide(m, p, r);
  EXPECT_EQ(d.action.p_hp_set, expected.p_hp_set);
  EXPECT_EQ(d.action.p_gb_set, expected.p_gb_set);
  EXPECT_FALSE(d.note.empty());
}

TEST(Mpc, SolverInfeasibleFallsBackToRbc) {
  const auto p = plant();
  PlantState s;
  s.energy = 300.0;
  const Measurement m{s.energy, 500.0};
  const auto d = mpc_decide(m, s, flat_bundle(48, 500.0, 0.0, 0.15), p, {}, {}, rbc());
  EXPECT_EQ(d.status, LpStatus::Infeasible);
  EXPECT_EQ(d.action.origin, ActionOrigin::MPC_FALLBACK);
  const auto e = rbc_decide(m, p, rbc());
  EXPECT_EQ(d.action.p_hp_set, e.p_hp_set);
  EXPECT_EQ(d.action.p_gb_set, e.p_gb_set);
}

TEST(Mpc, HeatPumpOffDuringPriceSpike) {
  auto p = plant();
  p.loss_k = 0.005;
  PlantState s;
  s.energy = 600.0;  // well above e_min
  auto b = flat_bundle(48, 40.0, 0.0, 0.09);
  std::vector<double> price(b.elec_price.values().begin(), b.elec_price.values().end());
  price[0] = 0.6;  // thermal cost 0.2 > gas 0.065
  b.elec_price = TimeSeries(b.elec_price.grid(), price, Unit::eur_per_kWh);
  const auto d = mpc_decide({s.energy, 40.0}, s, b, p, {}, {}, rbc());
  ASSERT_EQ(d.action.origin, ActionOrigin::MPC);
  EXPECT_NEAR(d.action.p_hp_set, 0.0, 1e-9);
  EXPECT_NEAR(d.action.p_gb_set, 0.0, 1e-9);
}

TEST(Mpc, CommitmentPathUsesBranchAndBound) {
  auto p = plant();
  PlantState s;
  s.energy = 400.0;
  DispatchConfig cfg;
  cfg.horizon_steps = 8;
  cfg.use_commitment = true;
  cfg.p_hp_min_on = 10.0;
  cfg.p_gb_min_on = 40.0;
  const auto d = mpc_decide({s.energy, 45.0}, s, flat_bundle(8, 45.0, 5.0, 0.12), p, cfg, {},
                            rbc());
  EXPECT_EQ(d.action.origin, ActionOrigin::MPC);
  EXPECT_GE(d.nodes, 1);
  EXPECT_TRUE(d.action.p_hp_set < 1e-9 || d.action.p_hp_set >= 10.0 - 1e-7);
}
