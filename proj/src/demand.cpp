#include "foodland/demand.hpp"

#include <cmath>
#include <string>

#include "foodland/errors.hpp"

namespace foodland {

double caloric_demand_raw(double engel_intercept, double engel_slope, double income,
                          double population) {
  if (!(income > 0)) throw ModelError("caloric demand: income must be positive");
  if (!(population > 0)) throw ModelError("caloric demand: population must be positive");
  const double per_capita = engel_intercept + engel_slope * std::log(income);
  if (!(per_capita > 0)) {
    throw ModelError("caloric demand: non-positive per-capita calories at income " +
                     std::to_string(income));
  }
  return per_capita * population;
}

double meat_demand_raw(double meat_scale, double meat_elasticity, double income,
                       double population) {
  if (!(income > 0)) throw ModelError("meat demand: income must be positive");
  if (!(population > 0)) throw ModelError("meat demand: population must be positive");
  return meat_scale * std::pow(income, meat_elasticity) * population;
}

double feedback_factor(double last_demand, double last_output, double alpha, bool symmetric) {
  if (!(last_demand > 0)) throw ModelError("feedback_factor: previous demand must be positive");
  double shortfall = (last_demand - last_output) / last_demand;
  if (!symmetric && shortfall < 0.0) shortfall = 0.0;
  return 1.0 - alpha * shortfall;
}

DemandNormalization normalization_from_raw(double raw_meat_t0, double raw_residual_t0,
                                           double meat_anchor, double crop_anchor) {
  if (!(raw_meat_t0 > 0)) {
    throw ModelError("demand normalization: raw meat demand at start year must be positive");
  }
  if (!(raw_residual_t0 > 0)) {
    throw ModelError(
        "demand normalization: raw crop-food residual at start year must be positive "
        "(meat calories exceed total calories; demand coefficients and driver units "
        "are inconsistent)");
  }
  if (!(meat_anchor > 0) || !(crop_anchor > 0)) {
    throw ModelError("demand normalization: anchors must be positive");
  }
  return {raw_meat_t0 / meat_anchor, raw_residual_t0 / crop_anchor};
}

namespace {

struct RawPair {
  double meat;
  double residual;
};

RawPair raw_at(const Drivers& drivers, int year, const ModelParams& p) {
  const DriverPoint d = drivers.at(year);
  const double meat = meat_demand_raw(p.meat_scale, p.meat_elasticity, d.income, d.population);
  const double calories =
      caloric_demand_raw(p.engel_intercept, p.engel_slope, d.income, d.population);
  const double residual = calories - p.kcal_per_meat_unit * meat;
  if (!(residual > 0)) {
    throw ModelError("crop-food demand non-positive at year " + std::to_string(year) +
                     " (meat calorie equivalents exceed total calories)");
  }
  return {meat, residual};
}

// Removes a fraction `damping` of the series growth past the policy year.
double damp(double raw, double raw_policy, double damping) {
  return raw_policy + (1.0 - damping) * (raw - raw_policy);
}

}  // namespace

DemandModel DemandModel::initialize(const Drivers& drivers, const ModelParams& params) {
  DemandModel m;
  const RawPair t0 = raw_at(drivers, params.start_year, params);
  m.norm_ = normalization_from_raw(t0.meat, t0.residual, params.meat_anchor(),
                                   params.crop_anchor());
  const RawPair pol = raw_at(drivers, params.policy_year, params);
  m.raw_meat_policy_ = pol.meat;
  m.raw_residual_policy_ = pol.residual;
  return m;
}

DemandModel::Exo DemandModel::exogenous(const Drivers& drivers, int year,
                                        const ModelParams& params) const {
  RawPair raw = raw_at(drivers, year, params);
  if (year > params.policy_year) {
    if (params.policy.demand_damping_meat > 0.0) {
      raw.meat = damp(raw.meat, raw_meat_policy_, params.policy.demand_damping_meat);
    }
    if (params.policy.demand_damping_crop > 0.0) {
      raw.residual = damp(raw.residual, raw_residual_policy_, params.policy.demand_damping_crop);
    }
  }
  return {raw.meat / norm_.omega_meat, raw.residual / norm_.omega_crop};
}

}  // namespace foodland
