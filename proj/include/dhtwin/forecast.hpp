#pragma once

#include <cstddef>

#include "dhtwin/timeseries.hpp"

namespace dhtwin {

// Affine solar correlation P = a*G + b*T + c (kW, with G in W/m2, T in degC).
struct SolarFitCoefficients {
  double a_irradiance = 0.0;
  double b_ambient = 0.0;
  double c_offset = 0.0;

  bool operator==(const SolarFitCoefficients&) const = default;
};

/// Ordinary least squares via the normal equations of the centred design,
/// solved by Gaussian elimination with partial pivoting. Throws
/// RankDeficient when G or T carries no information beyond the intercept.
SolarFitCoefficients fit_solar(const TimeSeries& irradiance, const TimeSeries& ambient,
                               const TimeSeries& production);

/// max(0, area_scale * (a*G + b*T + c)) per sample.
TimeSeries predict_solar(const SolarFitCoefficients& coeffs, const TimeSeries& irradiance,
                         const TimeSeries& ambient, double area_scale);

struct ForecastBundle {
  TimeSeries load;        // kW
  TimeSeries solar;       // kW
  TimeSeries elec_price;  // eur/kWh (electric)
  double gas_price = 0.065;  // eur/kWh
};

struct Actuals {
  const TimeSeries& load;
  const TimeSeries& solar_actual;
  const TimeSeries& elec_price;
};

/// Load and prices are perfect (sliced actuals); only solar comes from the
/// prediction series.
ForecastBundle make_bundle(const Actuals& actuals, const TimeSeries& solar_predicted,
                           std::size_t start_index, std::size_t length,
                           double gas_price = 0.065);

}  // namespace dhtwin
