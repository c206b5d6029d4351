#pragma once

#include "foodland/drivers.hpp"
#include "foodland/params.hpp"

namespace foodland {

// Raw (pre-normalization) per-year demands. Calories follow an Engel curve in
// log income, meat a power law; the crop-food residual converts meat to
// calorie equivalents before subtracting. Throws ModelError when drivers
// leave the model domain (non-positive calories or residual).
double caloric_demand_raw(double engel_intercept, double engel_slope, double income,
                          double population);
double meat_demand_raw(double meat_scale, double meat_elasticity, double income,
                       double population);

// Previous-period shortfall feedback on demand. Returns 1 - alpha * shortfall
// fraction, clamped at 1 unless `symmetric` lets surpluses raise demand.
double feedback_factor(double last_demand, double last_output, double alpha, bool symmetric);

struct DemandNormalization {
  double omega_meat = 1.0;  // raw meat units per model meat unit
  double omega_crop = 1.0;  // raw calorie units per model crop unit
};

// omega_meat = raw meat demand at t0 / meat anchor; omega_crop = raw crop-food
// residual at t0 / crop anchor. Throws ModelError when either raw value is
// non-positive.
DemandNormalization normalization_from_raw(double raw_meat_t0, double raw_residual_t0,
                                           double meat_anchor, double crop_anchor);

// Exogenous demand series in model units, anchored at the start year and
// damped after the policy year when demand-reduction policies are active.
class DemandModel {
 public:
  struct Exo {
    double meat;       // model meat units
    double crop_food;  // model crop units (food only; feed is coupled later)
  };

  static DemandModel initialize(const Drivers& drivers, const ModelParams& params);

  Exo exogenous(const Drivers& drivers, int year, const ModelParams& params) const;

  const DemandNormalization& normalization() const { return norm_; }

 private:
  DemandNormalization norm_;
  double raw_meat_policy_ = 0.0;      // undamped raw series at the policy year
  double raw_residual_policy_ = 0.0;
};

}  // namespace foodland
