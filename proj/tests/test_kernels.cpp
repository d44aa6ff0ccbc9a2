#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "dhtwin/kernels.hpp"

using namespace dhtwin::kernels;

namespace {

std::vector<double> random_tableau(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> t(rows * cols);
  for (auto& v : t) v = u(gen);
  // Some exact zeros in the pivot column exercise the skip path.
  for (std::size_t r = 0; r < rows; r += 3) t[r * cols + 1] = 0.0;
  t[2 * cols + 1] = 4.0;
  return t;
}

}  // namespace

TEST(Pivot, HandExample) {
  // [2 4 | 6]      [1 2 | 3]
  // [1 3 | 5]  ->  [0 1 | 2]
  std::vector<double> t = {2, 4, 6, 1, 3, 5};
  pivot_serial(t, 2, 3, 0, 0);
  EXPECT_EQ(t, (std::vector<double>{1, 2, 3, 0, 1, 2}));
}

TEST(Pivot, PivotColumnBecomesUnitVector) {
  auto t = random_tableau(40, 30, 1);
  pivot_serial(t, 40, 30, 2, 1);
  for (std::size_t r = 0; r < 40; ++r) EXPECT_EQ(t[r * 30 + 1], r == 2 ? 1.0 : 0.0);
}

TEST(Pivot, ParallelMatchesSerialBitForBit) {
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{5, 7}, {200, 350}, {600, 900}}) {
    const auto base = random_tableau(rows, cols, rows * 31 + cols);
    auto a = base, b = base, c = base;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t pr = (2 + 5 * k) % rows, pc = 1 + k;
      if (a[pr * cols + pc] == 0.0) continue;
      pivot_serial(a, rows, cols, pr, pc);
      pivot_parallel(b, rows, cols, pr, pc);
      pivot(c, rows, cols, pr, pc, Exec::automatic);
    }
    EXPECT_EQ(a, b) << rows << "x" << cols;
    EXPECT_EQ(a, c) << rows << "x" << cols;
  }
}
