#include "dhtwin/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dhtwin/error.hpp"

namespace dhtwin {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::NonUniformGrid: return "NonUniformGrid";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::IoError: return "IoError";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NonFiniteInput: return "NonFiniteInput";
    case Errc::NonPositiveInput: return "NonPositiveInput";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::MalformedProblem: return "MalformedProblem";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::HorizonTooLong: return "HorizonTooLong";
    case Errc::InconsistentParams: return "InconsistentParams";
    case Errc::NotOptimal: return "NotOptimal";
    case Errc::InternalConsistency: return "InternalConsistency";
    case Errc::DataExhausted: return "DataExhausted";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::PeriodMismatch: return "PeriodMismatch";
  }
  return "Unknown";
}

std::string_view unit_name(Unit u) noexcept {
  switch (u) {
    case Unit::kW: return "kW";
    case Unit::kWh: return "kWh";
    case Unit::eur_per_kWh: return "eur_per_kWh";
    case Unit::W_per_m2: return "W_per_m2";
    case Unit::degC: return "degC";
  }
  return "?";
}

Unit parse_unit(std::string_view name) {
  for (Unit u : {Unit::kW, Unit::kWh, Unit::eur_per_kWh, Unit::W_per_m2,
                 Unit::degC}) {
    if (unit_name(u) == name) return u;
  }
  throw Error(Errc::ParseError, "unknown unit '" + std::string(name) + "'");
}

// --- timestamps ------------------------------------------------------------

std::string format_iso8601(Timestamp t) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{t}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss hms{tp - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

namespace {

bool parse_int(std::string_view s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

// Accepts YYYY-MM-DDTHH:MM[:SS][Z]; a space may replace the 'T'.
Timestamp parse_iso8601(std::string_view text) {
  auto fail = [&] {
    return Error(Errc::ParseError,
                 "bad ISO-8601 timestamp '" + std::string(text) + "'");
  };
  if (!text.empty() && text.back() == 'Z') text.remove_suffix(1);
  if (text.size() != 16 && text.size() != 19) throw fail();
  if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':')
    throw fail();
  int y, mo, d, h, mi, s = 0;
  if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), mo) ||
      !parse_int(text.substr(8, 2), d) || !parse_int(text.substr(11, 2), h) ||
      !parse_int(text.substr(14, 2), mi))
    throw fail();
  if (text.size() == 19) {
    if (text[16] != ':' || !parse_int(text.substr(17, 2), s)) throw fail();
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) throw fail();
  const sys_days sd{ymd};
  return sd.time_since_epoch().count() * 86400LL + h * 3600LL + mi * 60LL + s;
}

// --- grid / series ---------------------------------------------------------

TimeGrid::TimeGrid(Timestamp start, double step_hours, std::size_t count) {
  if (!(step_hours > 0.0) || !std::isfinite(step_hours))
    throw Error(Errc::InvalidArgument, "time step must be positive");
  const double secs = step_hours * 3600.0;
  const auto rounded = std::llround(secs);
  if (rounded <= 0 || std::abs(secs - static_cast<double>(rounded)) > 1e-6)
    throw Error(Errc::InvalidArgument,
                "time step must be a whole number of seconds");
  *this = from_seconds(start, rounded, count);
}

TimeGrid TimeGrid::from_seconds(Timestamp start, std::int64_t step_seconds,
                                std::size_t count) {
  if (step_seconds <= 0)
    throw Error(Errc::InvalidArgument, "time step must be positive");
  if (count < 1) throw Error(Errc::InvalidArgument, "grid needs count >= 1");
  TimeGrid g;
  g.start_ = start;
  g.step_seconds_ = step_seconds;
  g.count_ = count;
  return g;
}

TimeSeries::TimeSeries(TimeGrid grid, std::vector<double> values, Unit unit)
    : grid_(grid), values_(std::move(values)), unit_(unit) {
  if (values_.size() != grid_.count())
    throw Error(Errc::InvalidArgument,
                "series length " + std::to_string(values_.size()) +
                    " does not match grid count " +
                    std::to_string(grid_.count()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw Error(Errc::NonFiniteInput,
                  "non-finite value at index " + std::to_string(i));
  }
}

TimeSeries slice_window(const TimeSeries& series, std::size_t start_index,
                        std::size_t length) {
  const auto& g = series.grid();
  if (length == 0 || start_index > g.count() ||
      length > g.count() - start_index)
    throw Error(Errc::OutOfRange,
                "window [" + std::to_string(start_index) + ", +" +
                    std::to_string(length) + ") outside series of " +
                    std::to_string(g.count()));
  auto v = series.values().subspan(start_index, length);
  return TimeSeries(
      TimeGrid::from_seconds(g.timestamp(start_index), g.step_seconds(), length),
      std::vector<double>(v.begin(), v.end()), series.unit());
}

void require_same_grid(std::span<const TimeSeries* const> series) {
  for (const auto* s : series) {
    if (!(s->grid() == series.front()->grid()))
      throw Error(Errc::GridMismatch, "series do not share one time grid");
  }
}

// --- CSV -------------------------------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

struct RawRows {
  std::vector<std::string> header;
  std::vector<Timestamp> stamps;
  std::vector<std::vector<double>> cols;
};

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto c = line.find(',', pos);
    out.push_back(line.substr(pos, c == std::string_view::npos ? c : c - pos));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

RawRows read_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  RawRows r;
  std::string line;
  std::size_t row = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_commas(line);
    if (!header_done) {
      header_done = true;
      if (fields[0] == "timestamp") {
        for (auto f : fields) r.header.emplace_back(f);
        r.cols.resize(fields.size() - 1);
        continue;
      }
      throw Error(Errc::ParseError,
                  "missing header line 'timestamp,...' in " + path.string());
    }
    if (fields.size() != r.header.size())
      throw Error(Errc::ParseError, "row " + std::to_string(row) + ": expected " +
                                        std::to_string(r.header.size()) +
                                        " fields");
    try {
      r.stamps.push_back(parse_iso8601(fields[0]));
    } catch (const Error&) {
      throw Error(Errc::ParseError,
                  "row " + std::to_string(row) + ": bad timestamp");
    }
    for (std::size_t c = 1; c < fields.size(); ++c) {
      double v = 0;
      auto f = fields[c];
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || p != f.data() + f.size() || !std::isfinite(v))
        throw Error(Errc::ParseError, "row " + std::to_string(row) +
                                          ": bad value '" + std::string(f) + "'");
      r.cols[c - 1].push_back(v);
    }
    ++row;
  }
  if (!header_done || r.stamps.empty())
    throw Error(Errc::EmptyFile, path.string() + " has no data rows");
  if (r.stamps.size() < 2)
    throw Error(Errc::ParseError,
                "need a minimum of 2 rows to infer the time step, got 1");
  return r;
}

TimeGrid infer_grid(const std::vector<Timestamp>& stamps) {
  const auto step = stamps[1] - stamps[0];
  if (step <= 0)
    throw Error(Errc::ParseError, "timestamps must be strictly increasing");
  for (std::size_t i = 1; i < stamps.size(); ++i) {
    const double d = static_cast<double>(stamps[i] - stamps[i - 1]);
    if (std::abs(d - static_cast<double>(step)) > 1e-6 * static_cast<double>(step))
      throw Error(Errc::NonUniformGrid,
                  "spacing changes at row " + std::to_string(i));
  }
  return TimeGrid::from_seconds(stamps[0], step, stamps.size());
}

Unit unit_from_label(std::string_view label) {
  for (Unit u : {Unit::eur_per_kWh, Unit::W_per_m2, Unit::kWh, Unit::kW,
                 Unit::degC}) {
    const auto n = unit_name(u);
    if (label.size() > n.size() && label.ends_with(n) &&
        label[label.size() - n.size() - 1] == '_')
      return u;
  }
  throw Error(Errc::ParseError,
              "column '" + std::string(label) + "' has no unit suffix");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace

TimeSeries read_csv(const std::filesystem::path& path, Unit expected_unit) {
  auto rows = read_rows(path);
  if (rows.cols.size() != 1)
    throw Error(Errc::ParseError, "expected a single value column");
  const auto unit = unit_from_label(rows.header[1]);
  if (unit != expected_unit)
    throw Error(Errc::ParseError, "column unit " + std::string(unit_name(unit)) +
                                      " differs from expected " +
                                      std::string(unit_name(expected_unit)));
  return TimeSeries(infer_grid(rows.stamps), std::move(rows.cols[0]), unit);
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  auto rows = read_rows(path);
  const auto grid = infer_grid(rows.stamps);
  CsvTable t;
  for (std::size_t c = 0; c < rows.cols.size(); ++c) {
    t.names.push_back(rows.header[c + 1]);
    t.columns.emplace_back(grid, std::move(rows.cols[c]),
                           unit_from_label(rows.header[c + 1]));
  }
  return t;
}

const TimeSeries& CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return columns[i];
  throw Error(Errc::ParseError, "missing column '" + std::string(name) + "'");
}

void write_csv(std::span<const NamedColumn> columns,
               const std::filesystem::path& path) {
  if (columns.empty()) throw Error(Errc::InvalidArgument, "no columns to write");
  const auto& grid = columns.front().series->grid();
  for (const auto& c : columns)
    if (!(c.series->grid() == grid))
      throw Error(Errc::GridMismatch, "column " + c.name + " is on another grid");
  std::string out = "timestamp";
  for (const auto& c : columns) out += "," + c.name;
  out += '\n';
  for (std::size_t i = 0; i < grid.count(); ++i) {
    out += format_iso8601(grid.timestamp(i));
    for (const auto& c : columns) {
      out += ',';
      out += format_double((*c.series)[i]);
    }
    out += '\n';
  }
  write_text(path, out);
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path) {
  const NamedColumn col{"value_" + std::string(unit_name(series.unit())), &series};
  write_csv(std::span<const NamedColumn>(&col, 1), path);
}

}  // namespace dhtwin
