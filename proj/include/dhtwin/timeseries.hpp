#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dhtwin {

enum class Unit { kW, kWh, eur_per_kWh, W_per_m2, degC };

std::string_view unit_name(Unit u) noexcept;
Unit parse_unit(std::string_view name);

/// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

std::string format_iso8601(Timestamp t);
Timestamp parse_iso8601(std::string_view text);

// Uniform time grid. The step is held in whole seconds so that
// timestamp(i) is exact integer arithmetic.
class TimeGrid {
 public:
  TimeGrid(Timestamp start, double step_hours, std::size_t count);

  static TimeGrid from_seconds(Timestamp start, std::int64_t step_seconds,
                               std::size_t count);

  Timestamp start() const noexcept { return start_; }
  std::int64_t step_seconds() const noexcept { return step_seconds_; }
  double step_hours() const noexcept { return step_seconds_ / 3600.0; }
  std::size_t count() const noexcept { return count_; }
  Timestamp timestamp(std::size_t i) const noexcept {
    return start_ + static_cast<std::int64_t>(i) * step_seconds_;
  }
  Timestamp end() const noexcept { return timestamp(count_); }

  bool operator==(const TimeGrid&) const = default;

 private:
  TimeGrid() = default;
  Timestamp start_ = 0;
  std::int64_t step_seconds_ = 0;
  std::size_t count_ = 0;
};

class TimeSeries {
 public:
  TimeSeries(TimeGrid grid, std::vector<double> values, Unit unit);

  const TimeGrid& grid() const noexcept { return grid_; }
  Unit unit() const noexcept { return unit_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const TimeSeries&) const = default;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  Unit unit_;
};

TimeSeries slice_window(const TimeSeries& series, std::size_t start_index,
                        std::size_t length);

// Throws GridMismatch unless every series shares `grid`.
void require_same_grid(std::span<const TimeSeries* const> series);

// --- CSV -------------------------------------------------------------------

TimeSeries read_csv(const std::filesystem::path& path, Unit expected_unit);

void write_csv(const TimeSeries& series, const std::filesystem::path& path);

struct NamedColumn {
  std::string name;  // header label, e.g. "load_kW"
  const TimeSeries* series;
};

// Several series on one grid, one column each.
void write_csv(std::span<const NamedColumn> columns,
               const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> names;
  std::vector<TimeSeries> columns;

  const TimeSeries& column(std::string_view name) const;
};

// Reads a multi-column file written by write_csv(columns). Units are taken
// from the header suffix after the last '_' that names a known unit.
CsvTable read_csv_table(const std::filesystem::path& path);

std::string format_double(double v);

// --- synthetic data --------------------------------------------------------

enum class SyntheticKind { heat_load, solar_irradiance, ambient_temp, elec_price };

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::heat_load;
  double peak = 1.0;
  std::uint64_t seed = 0;
  double noise_fraction = 0.0;
};

std::string_view synthetic_kind_name(SyntheticKind k) noexcept;
SyntheticKind parse_synthetic_kind(std::string_view name);

TimeSeries generate_synthetic(const SyntheticSpec& spec, const TimeGrid& grid);

}  // namespace dhtwin
