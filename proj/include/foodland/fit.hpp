#pragma once

#include <limits>
#include <vector>

namespace foodland {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
  std::vector<double> residuals;
};

// Ordinary least squares of ys on xs. Throws ModelError when the design is
// degenerate (fewer than two points or constant xs).
LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

struct ParamBounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

struct DemandFitBounds {
  ParamBounds engel_intercept, engel_slope, meat_scale, meat_elasticity;
};

struct DemandFit {
  double engel_intercept = 0.0;  // calories = intercept + slope * ln(income)
  double engel_slope = 0.0;
  double meat_scale = 0.0;  // meat = scale * income^elasticity
  double meat_elasticity = 0.0;
  double rss_calories = 0.0;  // in calorie space
  double rss_log_meat = 0.0;  // in log-meat space
  std::vector<double> residuals_calories;
  std::vector<double> residuals_log_meat;
};

// Recovers the demand-curve coefficients from per-capita observations:
// a linear fit of calories against ln(income) and a log-log fit of meat
// against income. Incomes and meat values must be positive. Fitted values
// violating the bounds raise ModelError naming the parameter.
DemandFit fit_demand_params(const std::vector<double>& incomes,
                            const std::vector<double>& calories_per_capita,
                            const std::vector<double>& meat_per_capita,
                            const DemandFitBounds& bounds = {});

// Exponential continuation v(year) = exp(log_anchor + growth * (year - anchor)),
// fitted log-linearly. Used to extend income series past their last data year.
struct ExponentialTrend {
  int anchor_year = 0;
  double log_anchor = 0.0;
  double growth = 0.0;
  double at(int year) const;
};
ExponentialTrend fit_exponential_trend(const std::vector<int>& years,
                                       const std::vector<double>& values);

// Logistic continuation: per-step relative growth regressed on the level
// (growth = rate * (1 - value/capacity)), continued recursively from the last
// data point. Falls back to holding the last value when the regression is
// degenerate or non-logistic. Used for population and organic-share series.
struct LogisticTrend {
  int last_year = 0;
  double last_value = 0.0;
  double rate = 0.0;      // 0 means hold-last fallback
  double capacity = 0.0;  // ignored when rate == 0
  double at(int year) const;
};
LogisticTrend fit_logistic_trend(const std::vector<int>& years,
                                 const std::vector<double>& values);

}  // namespace foodland
