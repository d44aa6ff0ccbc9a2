// Serial vs OpenMP timings for the tableau pivot and the scenario batch.
// Usage: bench_kernels [rows cols repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "dhtwin/kernels.hpp"
#include "dhtwin/runner.hpp"

using namespace dhtwin;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double time_pivots(std::vector<double> t, std::size_t rows, std::size_t cols, int repeats,
                   kernels::Exec exec) {
  const auto t0 = Clock::now();
  for (int k = 0; k < repeats; ++k) {
    const std::size_t pr = static_cast<std::size_t>(k) % rows;
    const std::size_t pc = static_cast<std::size_t>(k) % cols;
    if (t[pr * cols + pc] == 0.0) t[pr * cols + pc] = 1.0;
    kernels::pivot(t, rows, cols, pr, pc, exec);
  }
  return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t rows = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1200;
  const std::size_t cols = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 1800;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 50;
  std::printf("threads available: %d\n", omp_get_max_threads());

  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t(rows * cols);
  for (auto& v : t) v = u(gen);

  const double ts = time_pivots(t, rows, cols, repeats, kernels::Exec::serial);
  const double tp = time_pivots(t, rows, cols, repeats, kernels::Exec::parallel);
  std::printf("pivot %zux%zu x%d  serial %.4f s  parallel %.4f s  speedup %.2f\n", rows, cols,
              repeats, ts, tp, ts / tp);

  std::vector<ScenarioConfig> configs;
  for (const char* name : {"A", "B", "C"}) {
    for (auto kind : {ControllerKind::RBC, ControllerKind::MPC}) {
      auto c = builtin_scenario(name);
      c.controller = kind;
      c.period_end = c.period_start + 3 * 86400;
      configs.push_back(c);
    }
  }
  auto t0 = Clock::now();
  const auto serial = run_batch(configs, kernels::Exec::serial);
  const double bs = seconds_since(t0);
  t0 = Clock::now();
  const auto parallel = run_batch(configs, kernels::Exec::parallel);
  const double bp = seconds_since(t0);
  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i)
    same = serial[i].kpi.total_cost == parallel[i].kpi.total_cost;
  std::printf("batch %zu runs x 3 days  serial %.3f s  parallel %.3f s  speedup %.2f  %s\n",
              configs.size(), bs, bp, bs / bp, same ? "identical" : "MISMATCH");
  return same ? 0 : 1;
}
