#include "foodland/fit.hpp"

#include <cmath>
#include <string>

#include "foodland/errors.hpp"

namespace foodland {

LinearFit fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ModelError("fit_linear: series length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw ModelError("fit_linear: need at least two points");
  long double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = (double)(sx / n), my = (double)(sy / n);
  long double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw ModelError("fit_linear: degenerate design (constant predictor)");
  LinearFit fit;
  fit.slope = (double)(sxy / sxx);
  fit.intercept = my - fit.slope * mx;
  fit.residuals.resize(n);
  long double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += (long double)fit.residuals[i] * fit.residuals[i];
  }
  fit.rss = (double)rss;
  return fit;
}

namespace {

void check_bound(double value, const ParamBounds& b, const char* name) {
  if (value < b.lo || value > b.hi) {
    throw ModelError(std::string("fit_demand_params: fitted ") + name +
                     " = " + std::to_string(value) + " violates declared bounds");
  }
}

}  // namespace

DemandFit fit_demand_params(const std::vector<double>& incomes,
                            const std::vector<double>& calories_per_capita,
                            const std::vector<double>& meat_per_capita,
                            const DemandFitBounds& bounds) {
  const std::size_t n = incomes.size();
  if (calories_per_capita.size() != n || meat_per_capita.size() != n) {
    throw ModelError("fit_demand_params: series length mismatch");
  }
  std::vector<double> log_income(n), log_meat(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(incomes[i] > 0)) throw ConfigError("fit_demand_params: incomes must be positive");
    if (!(meat_per_capita[i] > 0)) throw ConfigError("fit_demand_params: meat values must be positive");
    log_income[i] = std::log(incomes[i]);
    log_meat[i] = std::log(meat_per_capita[i]);
  }
  const LinearFit engel = fit_linear(log_income, calories_per_capita);
  const LinearFit meat = fit_linear(log_income, log_meat);

  DemandFit out;
  out.engel_intercept = engel.intercept;
  out.engel_slope = engel.slope;
  out.meat_scale = std::exp(meat.intercept);
  out.meat_elasticity = meat.slope;
  out.rss_calories = engel.rss;
  out.rss_log_meat = meat.rss;
  out.residuals_calories = engel.residuals;
  out.residuals_log_meat = meat.residuals;

  check_bound(out.engel_intercept, bounds.engel_intercept, "engel_intercept");
  check_bound(out.engel_slope, bounds.engel_slope, "engel_slope");
  check_bound(out.meat_scale, bounds.meat_scale, "meat_scale");
  check_bound(out.meat_elasticity, bounds.meat_elasticity, "meat_elasticity");
  return out;
}

double ExponentialTrend::at(int year) const {
  return std::exp(log_anchor + growth * (year - anchor_year));
}

ExponentialTrend fit_exponential_trend(const std::vector<int>& years,
                                       const std::vector<double>& values) {
  if (years.size() != values.size() || years.empty()) {
    throw ModelError("fit_exponential_trend: bad series");
  }
  std::vector<double> xs(years.size()), ys(years.size());
  for (std::size_t i = 0; i < years.size(); ++i) {
    if (!(values[i] > 0)) throw ModelError("fit_exponential_trend: values must be positive");
    xs[i] = years[i];
    ys[i] = std::log(values[i]);
  }
  ExponentialTrend tr;
  tr.anchor_year = years.back();
  if (years.size() == 1) {
    tr.log_anchor = ys[0];
    tr.growth = 0.0;
    return tr;
  }
  const LinearFit fit = fit_linear(xs, ys);
  tr.growth = fit.slope;
  // anchor on the fitted line at the last data year for a smooth handover
  tr.log_anchor = fit.intercept + fit.slope * tr.anchor_year;
  return tr;
}

double LogisticTrend::at(int year) const {
  if (year <= last_year) return last_value;
  double v = last_value;
  for (int y = last_year; y < year; ++y) {
    if (rate != 0.0) v += rate * v * (1.0 - v / capacity);
  }
  return v;
}

LogisticTrend fit_logistic_trend(const std::vector<int>& years,
                                 const std::vector<double>& values) {
  if (years.size() != values.size() || years.empty()) {
    throw ModelError("fit_logistic_trend: bad series");
  }
  LogisticTrend tr;
  tr.last_year = years.back();
  tr.last_value = values.back();
  if (years.size() < 3) return tr;  // hold-last

  // relative growth per year vs level; slope < 0 and positive intercept
  // characterize logistic saturation
  std::vector<double> levels, growths;
  for (std::size_t i = 0; i + 1 < years.size(); ++i) {
    const int dy = years[i + 1] - years[i];
    if (dy <= 0 || !(values[i] > 0)) return tr;
    const double g = (values[i + 1] - values[i]) / values[i] / dy;
    levels.push_back(values[i]);
    growths.push_back(g);
  }
  LinearFit fit;
  try {
    fit = fit_linear(levels, growths);
  } catch (const ModelError&) {
    return tr;  // constant series; hold last
  }
  if (!(fit.intercept > 0) || !(fit.slope < 0)) {
    // not saturating; fall back to exponential continuation when growing
    if (fit.intercept > 0) {
      tr.rate = fit.intercept;
      tr.capacity = std::numeric_limits<double>::infinity();
    }
    return tr;
  }
  tr.rate = fit.intercept;
  tr.capacity = fit.intercept / -fit.slope;
  return tr;
}

}  // namespace foodland
