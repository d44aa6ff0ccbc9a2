#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "dhtwin/control.hpp"
#include "dhtwin/error.hpp"
#include "dhtwin/plant.hpp"

using namespace dhtwin;

namespace {

PlantParams no_loss() {
  auto p = PlantParams::defaults();
  p.loss_k = 0.0;
  return p;
}

ControlAction cmd(double hp, double gb) { return {hp, gb, ActionOrigin::RBC}; }

}  // namespace

TEST(StorageCapacity, HandComputedValues) {
  // 40 m3 * 1000 kg/m3 * 4.186 kJ/(kg K) * 20 K / 3600 kJ/kWh
  EXPECT_NEAR(storage_capacity_from_geometry(40.0, 20.0), 3348800.0 / 3600.0, 1e-9);
  EXPECT_NEAR(storage_capacity_from_geometry(40.0, 20.0), 930.2, 0.1);
  EXPECT_NEAR(storage_capacity_from_geometry(1.0, 1.0), 1.1628, 1e-4);
  try {
    storage_capacity_from_geometry(0.0, 20.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonPositiveInput);
  }
}

TEST(PlantParams, DefaultsAndValidation) {
  const auto p = PlantParams::defaults();
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.e_min, 0.2 * p.e_max);
  EXPECT_DOUBLE_EQ(p.e_curtail, 0.95 * p.e_max);
  auto bad = p;
  bad.e_min = bad.e_curtail;
  EXPECT_THROW(bad.validate(), Error);
  bad = p;
  bad.cop = 0.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Step, BalancedFlowsLeaveEnergyUnchanged) {
  PlantState s;
  s.energy = 400.0;
  const auto r = step(s, no_loss(), cmd(20.0, 30.0), 10.0, 60.0, 0.5);
  EXPECT_EQ(r.state.energy, 400.0);
  EXPECT_EQ(r.record.curtailed, 0.0);
  EXPECT_EQ(r.record.unmet, 0.0);
}

TEST(Step, LossTermEuler) {
  auto p = PlantParams::defaults();
  p.e_max = 2000.0;
  p.e_curtail = 1900.0;
  p.e_min = 100.0;
  PlantState s;
  s.energy = 1000.0;
  const auto r = step(s, p, cmd(0, 0), 0.0, 0.0, 0.5);
  EXPECT_DOUBLE_EQ(r.state.energy, 997.5);
  EXPECT_DOUBLE_EQ(r.record.loss, 2.5);
}

TEST(Step, CurtailmentAtThreshold) {
  const auto p = no_loss();
  PlantState s;
  s.energy = p.e_curtail;
  const auto r = step(s, p, cmd(0, 0), 30.0, 0.0, 0.5);
  EXPECT_EQ(r.record.p_solar_applied, 0.0);
  EXPECT_DOUBLE_EQ(r.record.curtailed, 15.0);
  EXPECT_DOUBLE_EQ(r.state.cum_curtailed, 15.0);
}

TEST(Step, ShortfallIsRecordedAsUnmet) {
  PlantState s;
  s.energy = 10.0;
  const auto r = step(s, no_loss(), cmd(0, 0), 0.0, 100.0, 0.5);
  EXPECT_EQ(r.state.energy, 0.0);
  EXPECT_DOUBLE_EQ(r.record.unmet, 40.0);  // 10 - 0.5*100
}

TEST(Step, SurplusDropsSolarFirstThenClamps) {
  const auto p = no_loss();
  PlantState s;
  s.energy = p.e_max - 5.0;  // above e_curtail: solar already rejected
  auto r = step(s, p, cmd(0, 40.0), 10.0, 0.0, 0.5);
  EXPECT_EQ(r.state.energy, p.e_max);
  EXPECT_DOUBLE_EQ(r.record.dumped, 15.0);
  EXPECT_DOUBLE_EQ(r.record.curtailed, 5.0 + 15.0);

  s.energy = p.e_curtail - 1.0;  // below threshold, but solar would overfill
  r = step(s, p, cmd(0, 0), 200.0, 0.0, 0.5);
  EXPECT_EQ(r.record.p_solar_applied, 0.0);
  EXPECT_DOUBLE_EQ(r.record.curtailed, 100.0);
  EXPECT_EQ(r.record.dumped, 0.0);
  EXPECT_DOUBLE_EQ(r.state.energy, p.e_curtail - 1.0);
}

TEST(Step, CapacityAndRampClamping) {
  auto p = no_loss();
  p.ramp_gb = 40.0;
  PlantState s;
  s.energy = 400.0;
  s.p_gb_prev = 100.0;
  auto r = step(s, p, cmd(80.0, 500.0), 0.0, 0.0, 0.5);
  EXPECT_EQ(r.record.p_hp_applied, 50.0);
  EXPECT_EQ(r.record.p_gb_applied, 120.0);
  r = step(s, p, cmd(-5.0, 0.0), 0.0, 0.0, 0.5);
  EXPECT_EQ(r.record.p_hp_applied, 0.0);
  EXPECT_EQ(r.record.p_gb_applied, 80.0);
  EXPECT_EQ(r.state.p_gb_prev, 80.0);
  EXPECT_EQ(r.state.step_index, 1);
}

TEST(Step, RejectsNonFinite) {
  PlantState s;
  s.energy = 100.0;
  try {
    step(s, no_loss(), cmd(std::nan(""), 0), 0, 0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonFiniteInput);
  }
  EXPECT_THROW(step(s, no_loss(), cmd(0, 0), INFINITY, 0, 0.5), Error);
}

TEST(Step, IdleWithoutLossIsConstantForever) {
  PlantState s;
  s.energy = 321.0;
  for (int i = 0; i < 1000; ++i) s = step(s, no_loss(), cmd(0, 0), 0, 0, 0.5).state;
  EXPECT_EQ(s.energy, 321.0);
}

TEST(Snapshot, RestoreReplaysIdentically) {
  const auto p = PlantParams::defaults();
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PlantState s;
  s.energy = 500.0;
  for (int i = 0; i < 7; ++i) s = step(s, p, cmd(50 * u(gen), 200 * u(gen)), 80 * u(gen), 150 * u(gen), 0.5).state;
  EXPECT_EQ(restore(snapshot(s)), s);

  std::vector<std::array<double, 4>> inputs(10);
  for (auto& in : inputs) in = {50 * u(gen), 200 * u(gen), 80 * u(gen), 150 * u(gen)};
  auto run = [&](PlantState st) {
    std::vector<StepRecord> out;
    for (const auto& in : inputs) {
      auto r = step(st, p, cmd(in[0], in[1]), in[2], in[3], 0.5);
      out.push_back(r.record);
      st = r.state;
    }
    return out;
  };
  const auto snap = snapshot(s);
  const auto first = run(s);
  EXPECT_EQ(run(restore(snap)), first);
}

// Property: random trajectories close the energy balance and respect bounds.
TEST(Step, ConservationAndBoundsOnRandomRuns) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int run = 0; run < 50; ++run) {
    auto p = PlantParams::defaults();
    p.loss_k = 0.01 * u(gen);
    if (run % 2) {
      p.ramp_hp = 20.0;
      p.ramp_gb = 100.0;
    }
    PlantState s;
    s.energy = p.e_max * u(gen);
    const double e0 = s.energy;
    double net = 0.0, mag = e0, prev_curt = 0.0, prev_unmet = 0.0;
    for (int k = 0; k < 500; ++k) {
      const auto r = step(s, p, cmd(70 * u(gen) - 10, 260 * u(gen) - 30), 120 * u(gen),
                          250 * u(gen), 0.5);
      const auto& rec = r.record;
      EXPECT_GE(rec.p_hp_applied, 0.0);
      EXPECT_LE(rec.p_hp_applied, p.p_hp_max);
      EXPECT_GE(rec.p_gb_applied, 0.0);
      EXPECT_LE(rec.p_gb_applied, p.p_gb_max);
      if (p.ramp_hp) EXPECT_LE(std::abs(rec.p_hp_applied - s.p_hp_prev), *p.ramp_hp * 0.5 + 1e-12);
      if (p.ramp_gb) EXPECT_LE(std::abs(rec.p_gb_applied - s.p_gb_prev), *p.ramp_gb * 0.5 + 1e-12);
      EXPECT_GE(r.state.energy, 0.0);
      EXPECT_LE(r.state.energy, p.e_max);
      EXPECT_GE(r.state.cum_curtailed, prev_curt);
      EXPECT_GE(r.state.cum_unmet, prev_unmet);
      prev_curt = r.state.cum_curtailed;
      prev_unmet = r.state.cum_unmet;
      const double flow = 0.5 * (rec.p_hp_applied + rec.p_gb_applied + rec.p_solar_applied -
                                 rec.p_consumer);
      net += flow - rec.loss + rec.unmet - rec.dumped;
      mag += std::abs(flow) + rec.loss + rec.unmet + rec.dumped;
      s = r.state;
    }
    EXPECT_LE(std::abs((s.energy - e0) - net), 1e-9 * mag);
  }
}
