#include "foodland/drivers.hpp"

#include <algorithm>
#include <cmath>

#include "foodland/csv.hpp"
#include "foodland/errors.hpp"
#include "foodland/fit.hpp"

namespace foodland {

namespace {

const char* const kColumns[5] = {"year", "population", "income_per_capita",
                                 "organic_share_crop", "organic_share_pasture"};

void validate_rows(const std::vector<DriverRow>& rows) {
  if (rows.empty()) throw ConfigError("drivers: empty series");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const DriverRow& r = rows[i];
    const std::string at = "drivers: year " + std::to_string(r.year);
    if (i > 0 && rows[i - 1].year >= r.year) {
      throw ConfigError("drivers: years must be strictly increasing (row " +
                        std::to_string(i + 1) + ")");
    }
    if (!std::isfinite(r.population) || r.population <= 0) {
      throw ConfigError(at + ": population must be positive and finite");
    }
    if (!std::isfinite(r.income) || r.income <= 0) {
      throw ConfigError(at + ": income must be positive and finite");
    }
    for (double s : {r.organic_share_crop, r.organic_share_pasture}) {
      if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
        throw ConfigError(at + ": organic shares must lie in [0, 1]");
      }
    }
    if (i > 0) {
      if (r.organic_share_crop < rows[i - 1].organic_share_crop ||
          r.organic_share_pasture < rows[i - 1].organic_share_pasture) {
        throw ConfigError(at + ": organic shares must be nondecreasing");
      }
    }
  }
}

}  // namespace

Drivers Drivers::from_rows(std::vector<DriverRow> rows) {
  validate_rows(rows);
  Drivers d;
  d.rows_ = std::move(rows);
  return d;
}

Drivers Drivers::load_csv(const std::string& path) {
  CsvDoc doc = read_csv(path);
  if (doc.header.size() != 5) {
    throw ConfigError(path + ": expected 5 driver columns, got " +
                      std::to_string(doc.header.size()));
  }
  for (int i = 0; i < 5; ++i) {
    if (doc.header[i] != kColumns[i]) {
      throw ConfigError(path + ": column " + std::to_string(i + 1) + " must be '" +
                        kColumns[i] + "', got '" + doc.header[i] + "'");
    }
  }
  std::vector<DriverRow> rows;
  rows.reserve(doc.rows.size());
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    const auto& f = doc.rows[i];
    const std::string ctx = path + ":" + std::to_string(i + 2);
    DriverRow r;
    r.year = (int)parse_int_field(f[0], ctx + " year");
    r.population = parse_double_field(f[1], ctx + " population");
    r.income = parse_double_field(f[2], ctx + " income_per_capita");
    r.organic_share_crop = parse_double_field(f[3], ctx + " organic_share_crop");
    r.organic_share_pasture = parse_double_field(f[4], ctx + " organic_share_pasture");
    rows.push_back(r);
  }
  return from_rows(std::move(rows));
}

namespace {

// Organic land shares ramp linearly from zero at the series origin to the
// logistic value at the adoption take-off, then follow the logistic toward its
// cap.  The two segments meet exactly, so the series is continuous and
// nondecreasing.
double organic_share_trajectory(int year, double cap, double rate, double midpoint) {
  constexpr int kOriginYear = 1960;
  constexpr int kTakeoffYear = 2022;
  const double takeoff = cap / (1.0 + std::exp(-rate * (kTakeoffYear - midpoint)));
  if (year <= kOriginYear) return 0.0;
  if (year <= kTakeoffYear) {
    return takeoff * double(year - kOriginYear) / double(kTakeoffYear - kOriginYear);
  }
  return cap / (1.0 + std::exp(-rate * (year - midpoint)));
}

}  // namespace

Drivers Drivers::builtin(int start_year, int end_year) {
  if (start_year > end_year) throw ConfigError("builtin drivers: start year after end year");
  std::vector<DriverRow> rows;
  rows.reserve(end_year - start_year + 1);
  for (int y = start_year; y <= end_year; ++y) {
    DriverRow r;
    r.year = y;
    r.population = 9.7e9 / (1.0 + std::exp(-0.065 * (y - 1978)));
    r.income = 30.0 * std::exp(0.002 * (y - 1960));
    r.organic_share_crop = organic_share_trajectory(y, 0.85, 0.10, 2038.0);
    r.organic_share_pasture = organic_share_trajectory(y, 0.30, 0.10, 2038.0);
    rows.push_back(r);
  }
  return from_rows(std::move(rows));
}

DriverPoint Drivers::at(int year) const {
  if (!covers(year)) {
    throw ModelError("drivers: year " + std::to_string(year) + " outside covered range [" +
                     std::to_string(first_year()) + ", " + std::to_string(last_year()) + "]");
  }
  auto it = std::lower_bound(rows_.begin(), rows_.end(), year,
                             [](const DriverRow& r, int y) { return r.year < y; });
  if (it->year == year) {
    return {it->population, it->income, it->organic_share_crop, it->organic_share_pasture};
  }
  const DriverRow& hi = *it;
  const DriverRow& lo = *(it - 1);
  const double w = double(year - lo.year) / double(hi.year - lo.year);
  auto lerp = [w](double a, double b) { return a + w * (b - a); };
  return {lerp(lo.population, hi.population), lerp(lo.income, hi.income),
          lerp(lo.organic_share_crop, hi.organic_share_crop),
          lerp(lo.organic_share_pasture, hi.organic_share_pasture)};
}

Drivers Drivers::extended_to(int end_year) const {
  if (last_year() >= end_year) return *this;
  std::vector<int> years;
  std::vector<double> pop, inc, shc, shp;
  for (const DriverRow& r : rows_) {
    years.push_back(r.year);
    pop.push_back(r.population);
    inc.push_back(r.income);
    shc.push_back(r.organic_share_crop);
    shp.push_back(r.organic_share_pasture);
  }
  const ExponentialTrend income_tr = fit_exponential_trend(years, inc);
  const LogisticTrend pop_tr = fit_logistic_trend(years, pop);
  const LogisticTrend shc_tr = fit_logistic_trend(years, shc);
  const LogisticTrend shp_tr = fit_logistic_trend(years, shp);

  std::vector<DriverRow> rows = rows_;
  double prev_shc = shc.back(), prev_shp = shp.back();
  for (int y = last_year() + 1; y <= end_year; ++y) {
    DriverRow r;
    r.year = y;
    r.population = pop_tr.at(y);
    r.income = income_tr.at(y);
    // shares stay within [prev, 1] so the nondecreasing invariant holds
    r.organic_share_crop = std::clamp(shc_tr.at(y), prev_shc, 1.0);
    r.organic_share_pasture = std::clamp(shp_tr.at(y), prev_shp, 1.0);
    prev_shc = r.organic_share_crop;
    prev_shp = r.organic_share_pasture;
    rows.push_back(r);
  }
  return from_rows(std::move(rows));
}

std::string Drivers::to_csv() const {
  std::string out = join_csv({kColumns[0], kColumns[1], kColumns[2], kColumns[3], kColumns[4]});
  out.push_back('\n');
  for (const DriverRow& r : rows_) {
    out += join_csv({std::to_string(r.year), format_double(r.population), format_double(r.income),
                     format_double(r.organic_share_crop), format_double(r.organic_share_pasture)});
    out.push_back('\n');
  }
  return out;
}

}  // namespace foodland
