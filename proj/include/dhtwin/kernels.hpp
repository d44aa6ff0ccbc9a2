#pragma once

#include <cstddef>
#include <span>

namespace dhtwin::kernels {

// serial is the reference path; parallel uses OpenMP; automatic picks
// parallel above a work threshold.
enum class Exec { serial, parallel, automatic };

/// Gauss-Jordan pivot on a row-major (rows x cols) tableau: scales
/// `pivot_row` so the pivot is 1 and eliminates `pivot_col` from every
/// other row. Rows are independent, so all paths give identical bits.
void pivot(std::span<double> tableau, std::size_t rows, std::size_t cols,
           std::size_t pivot_row, std::size_t pivot_col, Exec exec);

void pivot_serial(std::span<double> tableau, std::size_t rows, std::size_t cols,
                  std::size_t pivot_row, std::size_t pivot_col);
void pivot_parallel(std::span<double> tableau, std::size_t rows, std::size_t cols,
                    std::size_t pivot_row, std::size_t pivot_col);

inline constexpr std::size_t kParallelPivotThreshold = 1u << 16;

}  // namespace dhtwin::kernels
