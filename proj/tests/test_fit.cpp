#include <cmath>
#include <vector>

#include "doctest.h"
#include "foodland/errors.hpp"
#include "foodland/fit.hpp"
#include "foodland/rng.hpp"

using namespace foodland;

TEST_CASE("fit_linear recovers exact lines") {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3.5 - 2.0 * x);
  const LinearFit fit = fit_linear(xs, ys);
  CHECK(fit.intercept == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(fit.slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.rss == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
  REQUIRE(fit.residuals.size() == xs.size());
  for (double r : fit.residuals) CHECK(std::abs(r) < 1e-9);
}

TEST_CASE("fit_linear on two points is exact with zero RSS") {
  const LinearFit fit = fit_linear({1.0, 3.0}, {2.0, 8.0});
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(fit.rss == doctest::Approx(0.0).scale(1.0).epsilon(1e-18));
}

TEST_CASE("fit_linear rejects degenerate designs") {
  CHECK_THROWS_AS(fit_linear({1.0}, {2.0}), ModelError);
  CHECK_THROWS_AS(fit_linear({}, {}), ModelError);
  CHECK_THROWS_AS(fit_linear({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), ModelError);
  CHECK_THROWS_AS(fit_linear({1.0, 2.0}, {1.0}), ModelError);
}

TEST_CASE("fit_demand_params recovers generating coefficients exactly") {
  // synthesize noiseless observations from known curves
  const double a = -138.2, b = 744.4, c = 210.0, d = 0.65;
  std::vector<double> incomes, calories, meat;
  for (double income : {5.0, 10.0, 20.0, 40.0, 80.0, 160.0}) {
    incomes.push_back(income);
    calories.push_back(a + b * std::log(income));
    meat.push_back(c * std::pow(income, d));
  }
  const DemandFit fit = fit_demand_params(incomes, calories, meat);
  CHECK(fit.engel_intercept == doctest::Approx(a).epsilon(1e-9));
  CHECK(fit.engel_slope == doctest::Approx(b).epsilon(1e-9));
  CHECK(fit.meat_scale == doctest::Approx(c).epsilon(1e-9));
  CHECK(fit.meat_elasticity == doctest::Approx(d).epsilon(1e-9));
  CHECK(fit.rss_calories < 1e-12);
  CHECK(fit.rss_log_meat < 1e-12);
}

TEST_CASE("fit_demand_params stays within 2% under 1% multiplicative noise") {
  const double a = -138.2, b = 744.4, c = 210.0, d = 0.65;
  // Half the observations sit near the low-income end, where calories are
  // small and multiplicative noise is therefore tiny; that anchors the
  // intercept, which a purely high-income sample recovers poorly.
  std::vector<double> base_incomes;
  for (int i = 0; i < 30; ++i) base_incomes.push_back(1.25 * std::pow(1.02, i));
  for (int i = 0; i < 30; ++i) base_incomes.push_back(3.0 * std::pow(1.2, i));

  Rng rng(20220101);
  const int trials = 100;
  std::vector<double> err_a, err_b, err_c, err_d;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> incomes, calories, meat;
    for (double income : base_incomes) {
      incomes.push_back(income);
      calories.push_back((a + b * std::log(income)) * (1.0 + 0.01 * normal01(rng)));
      meat.push_back(c * std::pow(income, d) * (1.0 + 0.01 * normal01(rng)));
    }
    const DemandFit fit = fit_demand_params(incomes, calories, meat);
    err_a.push_back(std::abs((fit.engel_intercept - a) / a));
    err_b.push_back(std::abs((fit.engel_slope - b) / b));
    err_c.push_back(std::abs((fit.meat_scale - c) / c));
    err_d.push_back(std::abs((fit.meat_elasticity - d) / d));
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  CHECK(median(err_a) < 0.02);
  CHECK(median(err_b) < 0.02);
  CHECK(median(err_c) < 0.02);
  CHECK(median(err_d) < 0.02);
}

TEST_CASE("fit_demand_params validates input") {
  CHECK_THROWS_AS(fit_demand_params({1.0, 2.0}, {1.0}, {1.0, 2.0}), ModelError);
  CHECK_THROWS_AS(fit_demand_params({-1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}), ConfigError);
  CHECK_THROWS_AS(fit_demand_params({1.0, 2.0}, {1.0, 2.0}, {0.0, 2.0}), ConfigError);
  // constant income: both regressions are degenerate
  CHECK_THROWS_AS(fit_demand_params({5.0, 5.0, 5.0}, {1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}),
                  ModelError);
}

TEST_CASE("fit_demand_params enforces declared bounds") {
  std::vector<double> incomes, calories, meat;
  for (double income : {5.0, 10.0, 20.0}) {
    incomes.push_back(income);
    calories.push_back(100.0 + 50.0 * std::log(income));
    meat.push_back(2.0 * std::pow(income, 0.5));
  }
  DemandFitBounds bounds;
  bounds.meat_elasticity = {0.6, 0.7};  // true value 0.5 violates this
  CHECK_THROWS_AS(fit_demand_params(incomes, calories, meat, bounds), ModelError);

  bounds = DemandFitBounds{};
  bounds.engel_slope = {0.0, 10.0};  // true value 50 violates this
  CHECK_THROWS_AS(fit_demand_params(incomes, calories, meat, bounds), ModelError);
}

TEST_CASE("exponential trend extends log-linear series") {
  std::vector<int> years;
  std::vector<double> values;
  for (int y = 2000; y <= 2020; y += 5) {
    years.push_back(y);
    values.push_back(7.0 * std::exp(0.03 * (y - 2000)));
  }
  const ExponentialTrend tr = fit_exponential_trend(years, values);
  CHECK(tr.growth == doctest::Approx(0.03).epsilon(1e-9));
  CHECK(tr.at(2020) == doctest::Approx(values.back()).epsilon(1e-9));
  CHECK(tr.at(2040) == doctest::Approx(7.0 * std::exp(0.03 * 40)).epsilon(1e-8));

  // single point: flat continuation
  const ExponentialTrend flat = fit_exponential_trend({2020}, {5.0});
  CHECK(flat.at(2050) == doctest::Approx(5.0).epsilon(1e-12));

  CHECK_THROWS_AS(fit_exponential_trend({2000, 2010}, {1.0, -1.0}), ModelError);
  CHECK_THROWS_AS(fit_exponential_trend({}, {}), ModelError);
}

TEST_CASE("logistic trend saturates toward the implied capacity") {
  // generate a discrete logistic and check the continuation stays on it
  std::vector<int> years;
  std::vector<double> values;
  double v = 1000.0;
  const double rate = 0.08, cap = 10000.0;
  for (int y = 2000; y <= 2030; ++y) {
    years.push_back(y);
    values.push_back(v);
    v += rate * v * (1.0 - v / cap);
  }
  const LogisticTrend tr = fit_logistic_trend(years, values);
  CHECK(tr.rate == doctest::Approx(rate).epsilon(1e-6));
  CHECK(tr.capacity == doctest::Approx(cap).epsilon(1e-6));
  // continuation from the last data point follows the same recursion
  double expect = values.back();
  for (int y = 2030; y < 2060; ++y) expect += rate * expect * (1.0 - expect / cap);
  CHECK(tr.at(2060) == doctest::Approx(expect).epsilon(1e-6));
  // capacity bounds the far future
  CHECK(tr.at(2300) <= cap * (1.0 + 1e-9));
}

TEST_CASE("logistic trend falls back to hold-last when the series is flat or short") {
  const LogisticTrend short_tr = fit_logistic_trend({2000, 2010}, {5.0, 6.0});
  CHECK(short_tr.rate == 0.0);
  CHECK(short_tr.at(2100) == 6.0);

  const LogisticTrend flat_tr =
      fit_logistic_trend({2000, 2010, 2020, 2030}, {5.0, 5.0, 5.0, 5.0});
  CHECK(flat_tr.at(2100) == 5.0);
}
