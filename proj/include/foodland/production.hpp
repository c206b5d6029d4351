#pragma once

#include "foodland/params.hpp"

namespace foodland {

// Aggregate production per management class. Outputs scale with area, the
// technology multiplier (1 + tech), input levels raised to their exponents and
// the class mean integrity raised to the residual exponent. A class with zero
// area contributes zero regardless of its (possibly undefined) mean; a
// non-empty class requires a positive mean.

double crop_output_conventional(double area, double tech, double chem, double mech,
                                double mean_eps, double chem_exp, double mech_exp);

// Organic cropland uses no chemical inputs; the integrity exponent is
// unchanged, so the chemical factor is simply absent.
double crop_output_organic(double area, double tech, double mech, double mean_eps,
                           double chem_exp, double mech_exp);

double meat_output_conventional(double area, double tech, double stock, double mean_eps,
                                double stock_exp);

// Organic pasture obeys the density ceiling.
double meat_output_organic(double area, double tech, double stock, double stock_cap,
                           double mean_eps, double stock_exp);

// Crop demand induced by planned meat output.
double feed_demand(double feed_coeff, double planned_meat);

// Scale-back factor applied to planned meat when crop output cannot cover
// food plus feed demand: min(1, crop_output / (crop_food_demand + feed)).
double feed_scaling(double crop_output, double crop_food_demand, double feed);

// Logistic technology growth; 0 and cap are fixed points.
double advance_technology(double tech, double rate, double cap);

struct InputLevels {
  double tech = 0.0;
  double mech = 1.0;
  double chem = 1.0;
  double stock = 1.0;
};

// Relative-gap adjustment of mechanization/chemicals (crop gap) and livestock
// density (meat gap) against the previous period's realized output, floored
// at 1. Demands must be positive.
InputLevels update_inputs(const InputLevels& in, double crop_demand, double crop_output_prev,
                          double meat_demand, double meat_output_prev, double mech_rate,
                          double chem_rate, double stock_rate);

struct LandMove {
  int expand_cells = 0;
  int contract_cells = 0;
};

// Cell counts to convert/abandon for one land-use class given the relative
// demand gap (demand vs previous-period output). In quantum mode the baseline
// churn round(churn_fraction * cells) is scaled by an integer demand
// multiplier floor(1 + gain * gap) clamped at zero; scaled mode floors the
// product directly.
LandMove land_response(double demand, double output_prev, double gain_expand,
                       double gain_contract, double churn_fraction, int total_cells,
                       LandFloorMode mode);

}  // namespace foodland
