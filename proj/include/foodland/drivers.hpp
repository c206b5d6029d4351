#pragma once

#include <string>
#include <vector>

namespace foodland {

struct DriverRow {
  int year;
  double population;
  double income;
  double organic_share_crop;
  double organic_share_pasture;
};

struct DriverPoint {
  double population;
  double income;
  double organic_share_crop;
  double organic_share_pasture;
};

// The meat-demand scale that pairs with the builtin income units. The default
// ModelParams value assumes externally fitted series; when the builtin driver
// bundle is selected the run uses this value instead (unless the config
// overrides it explicitly).
inline constexpr double kBuiltinMeatScale = 0.0175;

// Exogenous scenario drivers: population, per-capita income and organic-area
// shares per year. Years are strictly increasing; queries between data years
// interpolate linearly; extension past the last data year follows fitted
// trend forms (exponential income, logistic population and shares).
class Drivers {
 public:
  static Drivers from_rows(std::vector<DriverRow> rows);

  // CSV schema: year, population, income_per_capita, organic_share_crop,
  // organic_share_pasture (header mandatory, this exact order).
  static Drivers load_csv(const std::string& path);

  // Smooth parametric default series covering [start_year, end_year].
  static Drivers builtin(int start_year, int end_year);

  int first_year() const { return rows_.front().year; }
  int last_year() const { return rows_.back().year; }
  bool covers(int year) const { return year >= first_year() && year <= last_year(); }

  // Linear interpolation at integer years; throws ModelError outside range.
  DriverPoint at(int year) const;

  // Returns a copy whose series reach at least `end_year`, appending
  // trend-extrapolated rows when needed.
  Drivers extended_to(int end_year) const;

  const std::vector<DriverRow>& rows() const { return rows_; }

  std::string to_csv() const;

 private:
  std::vector<DriverRow> rows_;
};

}  // namespace foodland
