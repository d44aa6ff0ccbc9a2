#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "dhtwin/error.hpp"
#include "dhtwin/timeseries.hpp"

namespace dhtwin {

std::string_view synthetic_kind_name(SyntheticKind k) noexcept {
  switch (k) {
    case SyntheticKind::heat_load: return "heat_load";
    case SyntheticKind::solar_irradiance: return "solar_irradiance";
    case SyntheticKind::ambient_temp: return "ambient_temp";
    case SyntheticKind::elec_price: return "elec_price";
  }
  return "?";
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  for (auto k : {SyntheticKind::heat_load, SyntheticKind::solar_irradiance,
                 SyntheticKind::ambient_temp, SyntheticKind::elec_price})
    if (synthetic_kind_name(k) == name) return k;
  throw Error(Errc::ParseError, "unknown synthetic kind '" + std::string(name) + "'");
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kYear = 365.25;

// Generator contract: std::mt19937_64 seeded with (seed XOR per-kind salt);
// a uniform in [0,1) is the top 53 bits of one draw.
class Stream {
 public:
  Stream(std::uint64_t seed, SyntheticKind kind)
      : gen_(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(kind) + 1))) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }

 private:
  std::mt19937_64 gen_;
};

struct Clock {
  double hour;       // UTC hour of day, [0, 24)
  double doy;        // day of year, 1-based, fractional
  std::int64_t day;  // days since epoch
};

Clock clock_of(Timestamp t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const auto d = floor<days>(tp);
  const year_month_day ymd{d};
  const sys_days jan1{ymd.year() / January / 1};
  const double secs_in_day = static_cast<double>((tp - d).count());
  return {secs_in_day / 3600.0,
          static_cast<double>((d - jan1).count()) + 1.0 + secs_in_day / 86400.0,
          d.time_since_epoch().count()};
}

double bump(double h, double centre, double width) {
  const double z = (h - centre) / width;
  return std::exp(-z * z);
}

}  // namespace

TimeSeries generate_synthetic(const SyntheticSpec& spec, const TimeGrid& grid) {
  if (!(spec.peak > 0.0))
    throw Error(Errc::InvalidArgument, "synthetic peak must be positive");
  if (!(spec.noise_fraction >= 0.0 && spec.noise_fraction < 1.0))
    throw Error(Errc::InvalidArgument, "noise_fraction must lie in [0,1)");

  Stream rng(spec.seed, spec.kind);
  const double nf = spec.noise_fraction;
  std::vector<double> v(grid.count());
  std::int64_t current_day = INT64_MIN;
  double day_factor = 1.0;

  switch (spec.kind) {
    case SyntheticKind::heat_load: {
      // Space heating scales with season; morning and evening draws on top.
      double rmax = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = clock_of(grid.timestamp(i));
        const double season = 0.55 + 0.45 * std::cos(kTwoPi * (c.doy - 15.0) / kYear);
        const double diurnal =
            0.55 + 0.45 * bump(c.hour, 7.0, 1.5) + 0.35 * bump(c.hour, 19.0, 2.0);
        v[i] = season * diurnal * (1.0 + nf * rng.symmetric());
        rmax = std::max(rmax, v[i]);
      }
      for (auto& x : v) x = spec.peak * std::max(x / rmax, 0.1);
      break;
    }
    case SyntheticKind::solar_irradiance: {
      // One cloud factor per day, jittered per step, always within [0.2, 1].
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = clock_of(grid.timestamp(i));
        if (c.day != current_day) {
          current_day = c.day;
          day_factor = 0.2 + 0.8 * rng.uniform();
        }
        const double jitter = rng.symmetric();
        if (c.hour <= 6.0 || c.hour >= 18.0) {
          v[i] = 0.0;
          continue;
        }
        const double season = 0.75 + 0.25 * std::cos(kTwoPi * (c.doy - 172.0) / kYear);
        const double cloud = std::clamp(day_factor * (1.0 + nf * jitter), 0.2, 1.0);
        v[i] = spec.peak * season * std::sin(std::numbers::pi * (c.hour - 6.0) / 12.0) *
               cloud;
      }
      break;
    }
    case SyntheticKind::ambient_temp: {
      // Seasonal mean swings between 0 and peak; +-0.2*peak daily cycle.
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = clock_of(grid.timestamp(i));
        const double mean =
            spec.peak * (0.5 + 0.5 * std::cos(kTwoPi * (c.doy - 200.0) / kYear));
        const double daily = 0.2 * spec.peak * std::cos(kTwoPi * (c.hour - 15.0) / 24.0);
        v[i] = mean + daily + nf * spec.peak * rng.symmetric();
      }
      break;
    }
    case SyntheticKind::elec_price: {
      // Off-peak plateau at 35% with morning and evening highs; a per-day
      // level factor in [0.8, 1.2].
      for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = clock_of(grid.timestamp(i));
        if (c.day != current_day) {
          current_day = c.day;
          day_factor = 0.8 + 0.4 * rng.uniform();
        }
        const double shape =
            0.35 + 0.65 * std::max(bump(c.hour, 8.0, 1.5), bump(c.hour, 19.0, 1.5));
        v[i] = std::max(spec.peak * shape * day_factor * (1.0 + nf * rng.symmetric()),
                        0.02 * spec.peak);
      }
      break;
    }
  }
  const Unit unit = spec.kind == SyntheticKind::heat_load          ? Unit::kW
                    : spec.kind == SyntheticKind::solar_irradiance ? Unit::W_per_m2
                    : spec.kind == SyntheticKind::ambient_temp     ? Unit::degC
                                                                   : Unit::eur_per_kWh;
  return TimeSeries(grid, std::move(v), unit);
}

}  // namespace dhtwin
