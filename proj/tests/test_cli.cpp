#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <string>

#include "test_util.hpp"

using dhtwin::testing::read_file;
using dhtwin::testing::TempDir;
using dhtwin::testing::write_file;

namespace {

struct Outcome {
  int code;
  std::string err;
};

Outcome run(const TempDir& dir, const std::string& args) {
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string(DHTWIN_CLI) + " " + args + " > " + (dir / "stdout.txt").string() +
                          " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  EXPECT_TRUE(read_file(dir / "stdout.txt").empty()) << "machine output must go to files";
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_file(err)};
}

}  // namespace

TEST(Cli, SimulateTwiceIsByteIdentical) {
  TempDir dir;
  const std::string base = "simulate --scenario A --controller rbc --seed 7 --days 3 --out ";
  ASSERT_EQ(run(dir, base + (dir / "r1").string()).code, 0);
  ASSERT_EQ(run(dir, base + (dir / "r2").string()).code, 0);
  for (const char* f : {"config.json", "steps.csv", "decisions.csv", "kpi.txt"}) {
    const auto a = read_file(dir / "r1" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, read_file(dir / "r2" / f)) << f;
  }
}

TEST(Cli, UnknownScenarioIsUsageError) {
  TempDir dir;
  const auto o = run(dir, "simulate --scenario X --controller rbc --out " + (dir / "x").string());
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("unknown scenario"), std::string::npos);
  EXPECT_NE(o.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run(dir, "frobnicate").code, 1);
  EXPECT_EQ(run(dir, "simulate --scenario A --controller pid --out " + (dir / "x").string()).code,
            1);
}

TEST(Cli, CompareAndPeriodMismatch) {
  TempDir dir;
  const auto r = [&](const char* c, int days, const char* out) {
    return run(dir, std::string("simulate --scenario A --controller ") + c + " --days " +
                        std::to_string(days) + " --out " + (dir / out).string())
        .code;
  };
  ASSERT_EQ(r("rbc", 2, "rbc"), 0);
  ASSERT_EQ(r("mpc", 2, "mpc"), 0);
  ASSERT_EQ(r("mpc", 3, "mpc3"), 0);
  const auto ok = run(dir, "compare " + (dir / "rbc" / "kpi.txt").string() + " " +
                               (dir / "mpc" / "kpi.txt").string() + " --out " +
                               (dir / "cmp.csv").string());
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(read_file(dir / "cmp.csv").rfind("indicator,value_a,value_b", 0), 0u);
  const auto bad = run(dir, "compare " + (dir / "rbc" / "kpi.txt").string() + " " +
                                (dir / "mpc3" / "kpi.txt").string() + " --out " +
                                (dir / "bad.csv").string());
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("PeriodMismatch"), std::string::npos);
}

TEST(Cli, GenDataFitSolarAndCsvReplay) {
  TempDir dir;
  const auto gen = dir / "data";
  ASSERT_EQ(run(dir, "gen-data --spec A --out " + gen.string()).code, 0);
  ASSERT_EQ(run(dir, "fit-solar --irradiance " + (gen / "irradiance.csv").string() +
                         " --ambient " + (gen / "ambient.csv").string() + " --production " +
                         (gen / "solar.csv").string() + " --out " + (dir / "fit.json").string())
                .code,
            0);
  EXPECT_NE(read_file(dir / "fit.json").find("a_irradiance"), std::string::npos);

  // The same inputs through the csv data path give the same RBC run.
  write_file(dir / "csv.json", R"({"name": "A", "data": {"mode": "csv",
      "csv": {"timeseries": "data/timeseries.csv"}}})");
  ASSERT_EQ(run(dir, "simulate --scenario A --controller rbc --out " + (dir / "syn").string()).code,
            0);
  const auto o = run(dir, "simulate --scenario " + (dir / "csv.json").string() +
                              " --controller rbc --out " + (dir / "csv").string());
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(read_file(dir / "syn" / "steps.csv"), read_file(dir / "csv" / "steps.csv"));
}

TEST(Cli, ReportAndMissingRun) {
  TempDir dir;
  ASSERT_EQ(run(dir, "simulate --scenario C --controller mpc --days 1 --out " +
                         (dir / "run").string())
                .code,
            0);
  ASSERT_EQ(run(dir, "report --run " + (dir / "run").string()).code, 0);
  EXPECT_FALSE(read_file(dir / "run" / "production.csv").empty());
  EXPECT_EQ(run(dir, "report --run " + (dir / "nope").string()).code, 2);
  EXPECT_EQ(run(dir, "fit-solar --irradiance a --ambient b --production c --out d").code, 2);
}
