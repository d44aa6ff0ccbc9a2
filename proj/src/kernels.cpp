#include "dhtwin/kernels.hpp"

#include <cstdint>

namespace dhtwin::kernels {

namespace {

inline void normalize_row(double* row, std::size_t cols, std::size_t pivot_col) {
  const double inv = 1.0 / row[pivot_col];
  for (std::size_t c = 0; c < cols; ++c) row[c] *= inv;
  row[pivot_col] = 1.0;
}

inline void eliminate(double* row, const double* prow, std::size_t cols,
                      std::size_t pivot_col) {
  const double f = row[pivot_col];
  if (f == 0.0) return;
  for (std::size_t c = 0; c < cols; ++c) row[c] -= f * prow[c];
  row[pivot_col] = 0.0;
}

}  // namespace

void pivot_serial(std::span<double> t, std::size_t rows, std::size_t cols,
                  std::size_t pivot_row, std::size_t pivot_col) {
  double* prow = t.data() + pivot_row * cols;
  normalize_row(prow, cols, pivot_col);
  for (std::size_t r = 0; r < rows; ++r) {
    if (r == pivot_row) continue;
    eliminate(t.data() + r * cols, prow, cols, pivot_col);
  }
}

void pivot_parallel(std::span<double> t, std::size_t rows, std::size_t cols,
                    std::size_t pivot_row, std::size_t pivot_col) {
  double* prow = t.data() + pivot_row * cols;
  normalize_row(prow, cols, pivot_col);
  const auto n = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < n; ++r) {
    if (static_cast<std::size_t>(r) == pivot_row) continue;
    eliminate(t.data() + r * cols, prow, cols, pivot_col);
  }
}

void pivot(std::span<double> t, std::size_t rows, std::size_t cols, std::size_t pivot_row,
           std::size_t pivot_col, Exec exec) {
  if (exec == Exec::parallel ||
      (exec == Exec::automatic && rows * cols >= kParallelPivotThreshold))
    pivot_parallel(t, rows, cols, pivot_row, pivot_col);
  else
    pivot_serial(t, rows, cols, pivot_row, pivot_col);
}

}  // namespace dhtwin::kernels
