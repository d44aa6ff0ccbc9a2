#include "dhtwin/forecast.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "dhtwin/error.hpp"

namespace dhtwin {

namespace {

// Solves a 3x3 system in place with partial pivoting. `scale` is the
// largest diagonal entry of the unreduced matrix; a pivot below
// 1e-12*scale is treated as rank loss.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                             std::array<double, 3> b, double scale) {
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (!(std::abs(a[piv][col]) > 1e-12 * scale))
      throw Error(Errc::RankDeficient, "design matrix columns are collinear");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, 3> x{};
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

SolarFitCoefficients fit_solar(const TimeSeries& irradiance, const TimeSeries& ambient,
                               const TimeSeries& production) {
  const TimeSeries* all[] = {&irradiance, &ambient, &production};
  require_same_grid(all);
  const std::size_t n = irradiance.size();
  if (n < 3) throw Error(Errc::InvalidArgument, "fit needs at least 3 samples");

  const auto g = irradiance.values();
  const auto t = ambient.values();
  const auto p = production.values();
  const double gm = mean(g);
  const double tm = mean(t);

  // Columns: centred G, centred T, 1.
  std::array<std::array<double, 3>, 3> ata{};
  std::array<double, 3> atb{};
  for (std::size_t i = 0; i < n; ++i) {
    const double row[3] = {g[i] - gm, t[i] - tm, 1.0};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) ata[r][c] += row[r] * row[c];
      atb[r] += row[r] * p[i];
    }
  }
  const double scale = std::max({ata[0][0], ata[1][1], ata[2][2]});
  const auto x = solve3(ata, atb, scale);
  return {x[0], x[1], x[2] - x[0] * gm - x[1] * tm};
}

TimeSeries predict_solar(const SolarFitCoefficients& coeffs, const TimeSeries& irradiance,
                         const TimeSeries& ambient, double area_scale) {
  const TimeSeries* all[] = {&irradiance, &ambient};
  require_same_grid(all);
  std::vector<double> out(irradiance.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double raw = coeffs.a_irradiance * irradiance[i] + coeffs.b_ambient * ambient[i] +
                       coeffs.c_offset;
    out[i] = std::max(0.0, area_scale * raw);
  }
  return TimeSeries(irradiance.grid(), std::move(out), Unit::kW);
}

ForecastBundle make_bundle(const Actuals& actuals, const TimeSeries& solar_predicted,
                           std::size_t start_index, std::size_t length,
                           double gas_price) {
  if (!(gas_price > 0.0)) throw Error(Errc::InvalidArgument, "gas price must be > 0");
  ForecastBundle b{slice_window(actuals.load, start_index, length),
                   slice_window(solar_predicted, start_index, length),
                   slice_window(actuals.elec_price, start_index, length), gas_price};
  const TimeSeries* all[] = {&b.load, &b.solar, &b.elec_price};
  require_same_grid(all);
  return b;
}

}  // namespace dhtwin
