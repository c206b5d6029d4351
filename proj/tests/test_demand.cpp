#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "foodland/demand.hpp"
#include "foodland/drivers.hpp"
#include "foodland/errors.hpp"
#include "foodland/params.hpp"

using namespace foodland;

namespace {

// Driver series with incomes chosen so all demand quantities stay positive
// under the default coefficients.
Drivers flat_pop_drivers() {
  std::vector<DriverRow> rows;
  for (int y = 1960; y <= 2100; ++y) {
    DriverRow r;
    r.year = y;
    r.population = 1.0e9;
    r.income = 10.0 * std::exp(0.004 * (y - 1960));
    r.organic_share_crop = 0.0;
    r.organic_share_pasture = 0.0;
    rows.push_back(r);
  }
  return Drivers::from_rows(rows);
}

ModelParams params_for(const Drivers& drivers) {
  ModelParams p;
  p.meat_scale = 0.02;  // keeps meat calories below the Engel total
  (void)drivers;
  return p;
}

}  // namespace

TEST_CASE("caloric demand follows the Engel curve in log income") {
  const double a = -138.2, b = 744.4;
  // per-capita calories times population, at hand-checkable incomes
  CHECK(caloric_demand_raw(a, b, std::exp(1.0), 1.0) ==
        doctest::Approx(606.2).epsilon(1e-9));
  CHECK(caloric_demand_raw(a, b, std::exp(2.0), 2.0) ==
        doctest::Approx(2701.2).epsilon(1e-9));
}

TEST_CASE("caloric demand oracle table") {
  const double a = -138.2, b = 744.4;
  struct Row {
    double income, population;
  };
  const Row rows[] = {{std::exp(1.0), 1.0}, {std::exp(2.0), 2.0}, {2.0, 1.0e9},
                      {30.0, 7.0e9},        {150.0, 9.5e9}};
  for (const Row& r : rows) {
    const double expect = (a + b * std::log(r.income)) * r.population;
    CHECK(caloric_demand_raw(a, b, r.income, r.population) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("caloric demand rejects non-positive per-capita calories") {
  // a + b ln(income) <= 0 leaves the model domain
  CHECK_THROWS_AS(caloric_demand_raw(-138.2, 744.4, 1.0, 1.0), ModelError);
  CHECK_THROWS_AS(caloric_demand_raw(-1.0, 1.0, std::exp(1.0), 1.0), ModelError);  // exactly 0
  CHECK_THROWS_AS(caloric_demand_raw(-138.2, 744.4, 0.0, 1.0), ModelError);
  CHECK_THROWS_AS(caloric_demand_raw(-138.2, 744.4, 30.0, 0.0), ModelError);
}

TEST_CASE("meat demand follows the income power law") {
  CHECK(meat_demand_raw(210.0, 0.65, 1.0, 1.0) == doctest::Approx(210.0).epsilon(1e-12));
  CHECK(meat_demand_raw(210.0, 0.65, 32.0, 1.0) ==
        doctest::Approx(210.0 * std::pow(32.0, 0.65)).epsilon(1e-12));
  CHECK(meat_demand_raw(210.0, 0.65, 32.0, 2.0) ==
        doctest::Approx(2.0 * 210.0 * std::pow(32.0, 0.65)).epsilon(1e-12));
  CHECK(meat_demand_raw(0.0175, 0.65, 30.0, 7.0e9) ==
        doctest::Approx(0.0175 * std::pow(30.0, 0.65) * 7.0e9).epsilon(1e-12));
  // elasticity one degenerates to proportionality
  CHECK(meat_demand_raw(2.0, 1.0, 7.0, 3.0) == doctest::Approx(42.0).epsilon(1e-12));

  CHECK_THROWS_AS(meat_demand_raw(210.0, 0.65, -1.0, 1.0), ModelError);
  CHECK_THROWS_AS(meat_demand_raw(210.0, 0.65, 1.0, 0.0), ModelError);
}

TEST_CASE("shortfall feedback damps demand and ignores surplus by default") {
  // 10% shortfall at strength 0.5: factor 0.95, so 1000 becomes 950
  CHECK(1000.0 * feedback_factor(1000.0, 900.0, 0.5, false) ==
        doctest::Approx(950.0).epsilon(1e-12));
  // 20% shortfall at strength 0.1: factor 0.98, so 2000 becomes 1960
  CHECK(2000.0 * feedback_factor(2000.0, 1600.0, 0.1, false) ==
        doctest::Approx(1960.0).epsilon(1e-12));
  // surplus clamps at one unless symmetric mode is on
  CHECK(feedback_factor(1000.0, 1500.0, 0.5, false) == 1.0);
  CHECK(feedback_factor(1000.0, 1500.0, 0.5, true) ==
        doctest::Approx(1.25).epsilon(1e-12));
  // zero strength is inert
  CHECK(feedback_factor(1000.0, 100.0, 0.0, false) == 1.0);
  CHECK_THROWS_AS(feedback_factor(0.0, 1.0, 0.5, false), ModelError);
}

TEST_CASE("feedback factor is bounded by the feedback strength") {
  for (double alpha : {0.0, 0.1, 0.5, 1.0}) {
    for (double output : {0.0, 250.0, 500.0, 999.0, 1000.0, 2000.0}) {
      const double f = feedback_factor(1000.0, output, alpha, false);
      CHECK(f >= 1.0 - alpha);
      CHECK(f <= 1.0);
    }
  }
}

TEST_CASE("demand normalization divides raw demand by the model anchors") {
  const DemandNormalization n = normalization_from_raw(7.0e9, 3.0e12, 3500.0, 1500.0);
  CHECK(n.omega_meat == doctest::Approx(2.0e6).epsilon(1e-12));
  CHECK(n.omega_crop == doctest::Approx(2.0e9).epsilon(1e-12));

  CHECK_THROWS_AS(normalization_from_raw(0.0, 3.0e12, 3500.0, 1500.0), ModelError);
  CHECK_THROWS_AS(normalization_from_raw(7.0e9, -1.0, 3500.0, 1500.0), ModelError);
  CHECK_THROWS_AS(normalization_from_raw(7.0e9, 3.0e12, 0.0, 1500.0), ModelError);
}

TEST_CASE("exogenous demand is anchored to the agricultural areas at the start year") {
  const Drivers drivers = flat_pop_drivers();
  const ModelParams p = params_for(drivers);
  const DemandModel model = DemandModel::initialize(drivers, p);

  const DemandModel::Exo exo0 = model.exogenous(drivers, p.start_year, p);
  CHECK(exo0.meat == doctest::Approx(p.meat_anchor()).epsilon(1e-12));
  CHECK(exo0.crop_food == doctest::Approx(p.crop_anchor()).epsilon(1e-12));
  CHECK(p.meat_anchor() == 3500);
  CHECK(p.crop_anchor() == 1500);

  // rising income and the normalization give growing model-unit demand
  const DemandModel::Exo exo1 = model.exogenous(drivers, 2000, p);
  const DemandModel::Exo exo2 = model.exogenous(drivers, 2100, p);
  CHECK(exo1.meat > exo0.meat);
  CHECK(exo2.meat > exo1.meat);
  CHECK(exo2.crop_food > exo1.crop_food);
}

TEST_CASE("exogenous demand matches the raw curves divided by omega") {
  const Drivers drivers = flat_pop_drivers();
  const ModelParams p = params_for(drivers);
  const DemandModel model = DemandModel::initialize(drivers, p);

  for (int year : {1960, 1980, 2022, 2060, 2100}) {
    const DriverPoint d = drivers.at(year);
    const double raw_meat =
        meat_demand_raw(p.meat_scale, p.meat_elasticity, d.income, d.population);
    const double raw_cal =
        caloric_demand_raw(p.engel_intercept, p.engel_slope, d.income, d.population);
    const double raw_residual = raw_cal - p.kcal_per_meat_unit * raw_meat;
    const DemandModel::Exo exo = model.exogenous(drivers, year, p);
    CHECK(exo.meat ==
          doctest::Approx(raw_meat / model.normalization().omega_meat).epsilon(1e-12));
    CHECK(exo.crop_food ==
          doctest::Approx(raw_residual / model.normalization().omega_crop).epsilon(1e-12));
  }
}

TEST_CASE("full demand damping freezes the series after the policy year") {
  const Drivers drivers = flat_pop_drivers();
  ModelParams p = params_for(drivers);
  p.policy.demand_damping_meat = 1.0;
  p.policy.demand_damping_crop = 1.0;
  const DemandModel model = DemandModel::initialize(drivers, p);

  const DemandModel::Exo at_policy = model.exogenous(drivers, p.policy_year, p);
  for (int year : {2023, 2050, 2100}) {
    const DemandModel::Exo exo = model.exogenous(drivers, year, p);
    CHECK(exo.meat == doctest::Approx(at_policy.meat).epsilon(1e-12));
    CHECK(exo.crop_food == doctest::Approx(at_policy.crop_food).epsilon(1e-12));
  }

  // the pre-policy series is untouched
  ModelParams base = params_for(drivers);
  const DemandModel plain = DemandModel::initialize(drivers, base);
  for (int year : {1960, 1990, 2022}) {
    CHECK(model.exogenous(drivers, year, p).meat ==
          doctest::Approx(plain.exogenous(drivers, year, base).meat).epsilon(1e-12));
  }
}

TEST_CASE("demand damping removes exactly the requested growth fraction") {
  const Drivers drivers = flat_pop_drivers();
  const ModelParams base = params_for(drivers);
  const DemandModel model = DemandModel::initialize(drivers, base);
  const double meat_policy = model.exogenous(drivers, base.policy_year, base).meat;

  double prev = std::numeric_limits<double>::infinity();
  for (double m : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    ModelParams p = base;
    p.policy.demand_damping_meat = m;
    const double undamped = model.exogenous(drivers, 2080, base).meat;
    const double damped = model.exogenous(drivers, 2080, p).meat;
    CHECK(damped ==
          doctest::Approx(meat_policy + (1.0 - m) * (undamped - meat_policy)).epsilon(1e-12));
    // stronger damping, lower demand
    CHECK(damped <= prev);
    prev = damped;
  }
}

TEST_CASE("initialization rejects driver/coefficient combinations without crop residual") {
  // huge meat scale pushes meat calories above total calories
  std::vector<DriverRow> rows = {{1960, 1.0e9, 20.0, 0.0, 0.0}, {1961, 1.0e9, 20.0, 0.0, 0.0},
                                 {2100, 1.0e9, 25.0, 0.0, 0.0}};
  const Drivers drivers = Drivers::from_rows(rows);
  ModelParams p;
  p.meat_scale = 1e6;
  CHECK_THROWS_AS(DemandModel::initialize(drivers, p), ModelError);
}
