#include "foodland/params.hpp"

#include <cmath>
#include <string>

#include "foodland/errors.hpp"

namespace foodland {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid parameter: " + what);
}

}  // namespace

void ModelParams::validate() const {
  require(grid_width > 0 && grid_height > 0, "grid dimensions must be positive");
  require(share_natural >= 0 && share_crop >= 0 && share_pasture >= 0,
          "land shares must be non-negative");
  require(std::fabs(share_natural + share_crop + share_pasture - 1.0) <= 1e-9,
          "land shares must sum to 1");
  require(correlation_length > 0, "correlation_length must be positive");
  require(lifespan_log_sd_natural >= 0 && lifespan_log_sd_crop >= 0 &&
              lifespan_log_sd_pasture >= 0,
          "lifespan log-sd must be non-negative");
  require(lifespan_median_natural > 0 && lifespan_median_crop > 0 &&
              lifespan_median_pasture > 0,
          "lifespan medians must be positive");
  require(eps_max > 1.0, "eps_max must exceed 1");
  require(eps_min > 0 && eps_min < 1.0, "eps_min must lie in (0, 1)");
  require(service_exponent >= 0, "service_exponent must be non-negative");
  require(degraded_threshold > 0 && degraded_threshold < 1.0,
          "degraded_threshold must lie in (0, 1)");
  require(forest_threshold > 1.0 && forest_threshold < eps_max,
          "forest_threshold must lie in (1, eps_max)");
  require(engel_slope > 0, "engel_slope must be positive");
  require(meat_scale > 0, "meat_scale must be positive");
  require(meat_elasticity > 0, "meat_elasticity must be positive");
  require(kcal_per_meat_unit > 0, "kcal_per_meat_unit must be positive");
  require(alpha_meat >= 0 && alpha_meat <= 1, "alpha_m must lie in [0, 1]");
  require(alpha_crop >= 0 && alpha_crop <= 1, "alpha_c must lie in [0, 1]");
  require(chem_exponent > 0 && chem_exponent < 1, "k must lie in (0, 1)");
  require(mech_exponent > 0 && mech_exponent < 1, "f must lie in (0, 1)");
  require(chem_exponent + mech_exponent <= 1.0, "k + f must not exceed 1");
  require(stock_exponent > 0 && stock_exponent <= 1, "h must lie in (0, 1]");
  require(stock_cap_organic >= 1.0, "lambda_max must be at least 1");
  require(mech_rate >= 0 && chem_rate >= 0 && stock_rate >= 0,
          "input adjustment rates must be non-negative");
  require(tech_rate >= 0, "nu must be non-negative");
  require(tech_cap > 0, "t_max must be positive");
  require(tech_initial >= 0 && tech_initial <= tech_cap,
          "tech_initial must lie in [0, t_max]");
  require(feed_coeff >= 0, "feed_coeff must be non-negative");
  require(churn_fraction >= 0, "phi must be non-negative");
  require(expand_gain_crop >= 0 && expand_gain_pasture >= 0 &&
              contract_gain_crop >= 0 && contract_gain_pasture >= 0,
          "land response gains must be non-negative");
  require(start_year < policy_year && policy_year < end_year,
          "timeline must satisfy start_year < policy_year < end_year");
  require(policy.chem_rate_scale >= 0 && policy.stock_rate_scale >= 0 &&
              policy.expand_gain_crop_scale >= 0 &&
              policy.expand_gain_pasture_scale >= 0,
          "policy scale factors must be non-negative");
  require(policy.organic_growth_scale_crop >= 0 &&
              policy.organic_growth_scale_pasture >= 0,
          "organic growth scales must be non-negative");
  require(policy.demand_damping_meat >= 0 && policy.demand_damping_meat <= 1 &&
              policy.demand_damping_crop >= 0 && policy.demand_damping_crop <= 1,
          "demand damping must lie in [0, 1]");
}

}  // namespace foodland
