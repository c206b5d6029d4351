#pragma once

#include <cmath>

namespace foodland {

// Integrity response of natural cells: logistic recovery toward eps_max
// (default) or the literal decay form kept for comparison runs.
enum class NaturalSign { growth, literal };

// How the per-year cell quota of the land-use response is discretized:
//   quantum: round(churn_fraction * cells) * max(0, floor(1 + gain * gap))
//   scaled:  max(0, floor(churn_fraction * (1 + gain * gap) * cells))
enum class LandFloorMode { quantum, scaled };

// Policy effects are stored as set-from-base scale factors so that applying
// the same policy twice is a no-op. All effects activate at policy_year;
// demand damping and organic-share growth scaling act on years strictly
// after it (the policy-year value itself is the anchor).
struct PolicyOverlay {
  double chem_rate_scale = 1.0;            // chemical-input adjustment speed
  double stock_rate_scale = 1.0;           // livestock-density adjustment speed
  double expand_gain_crop_scale = 1.0;     // demand-driven cropland expansion
  double expand_gain_pasture_scale = 1.0;  // demand-driven pasture expansion
  bool cap_stock_at_policy_year = false;   // freeze livestock density at its policy-year level
  double organic_growth_scale_crop = 1.0;  // post-policy organic-share growth
  double organic_growth_scale_pasture = 1.0;
  double demand_damping_meat = 0.0;  // fraction of post-policy demand growth removed
  double demand_damping_crop = 0.0;

  bool operator==(const PolicyOverlay&) const = default;
};

struct ModelParams {
  // grid and initial land composition
  int grid_width = 100;
  int grid_height = 100;
  double share_natural = 0.50;
  double share_crop = 0.15;
  double share_pasture = 0.35;
  double correlation_length = 10.0;  // of the initial natural-land field

  // per-cell degradation/recovery rates theta = 1/lifespan,
  // lifespan ~ Lognormal(median, log-sd), sampled once per cell
  double lifespan_log_sd_natural = 1.0;
  double lifespan_log_sd_crop = 1.0;
  double lifespan_log_sd_pasture = 1.0;
  double lifespan_median_natural = 1000.0;
  double lifespan_median_crop = 10000.0;
  double lifespan_median_pasture = 5000.0;

  // ecosystem integrity bounds and aggregate-service shape
  double eps_max = 2.0;
  double eps_min = 1e-6;
  double service_exponent = 0.25;
  double forest_threshold = 1.9;    // natural cells above count as forest
  double degraded_threshold = 0.1;  // cells below count as degraded

  // demand curves (per-capita calories vs log income, meat vs income power law)
  double engel_intercept = -138.2;
  double engel_slope = 744.4;
  double meat_scale = 210.0;
  double meat_elasticity = 0.65;
  double kcal_per_meat_unit = 3000.0;
  double alpha_meat = 0.5;  // shortfall feedback strength on meat demand
  double alpha_crop = 0.1;  // shortfall feedback strength on crop demand

  // production function and input adjustment
  double chem_exponent = 0.2;      // chemical inputs
  double mech_exponent = 0.5;      // mechanization
  double stock_exponent = 0.95;    // livestock density
  double stock_cap_organic = 3.0;  // density ceiling on organic pasture
  double mech_rate = 0.95;
  double chem_rate = 1.1;
  double stock_rate = 0.95;
  double tech_rate = 0.1;
  double tech_cap = 0.2;
  double tech_initial = 0.001;
  double feed_coeff = 0.29;  // crop units demanded per unit of planned meat output

  // land-use response
  double churn_fraction = 3e-4;  // baseline conversion/abandonment per year
  double expand_gain_crop = 130.0;
  double expand_gain_pasture = 500.0;
  double contract_gain_crop = 120.0;
  double contract_gain_pasture = 500.0;

  // timeline
  int start_year = 1960;
  int policy_year = 2022;
  int end_year = 2100;

  // behavior switches
  NaturalSign natural_sign = NaturalSign::growth;
  bool symmetric_demand_feedback = false;  // allow surplus to raise demand
  bool organic_lambda_cap = true;          // organic pasture degrades with capped density
  bool organic_crop_phi_exempt = true;     // organic crop skips the chemical degradation term
  LandFloorMode land_floor_mode = LandFloorMode::quantum;

  PolicyOverlay policy{};

  int total_cells() const { return grid_width * grid_height; }
  // Model-unit anchors: initial demand equals initial agricultural area, so
  // per-cell output is normalized to one at the start of a run.
  int meat_anchor() const { return (int)std::lround(share_pasture * total_cells()); }
  int crop_anchor() const { return (int)std::lround(share_crop * total_cells()); }

  // effective (possibly policy-scaled) values for a given simulation year
  double chem_rate_at(int year) const {
    return year >= policy_year ? chem_rate * policy.chem_rate_scale : chem_rate;
  }
  double stock_rate_at(int year) const {
    return year >= policy_year ? stock_rate * policy.stock_rate_scale : stock_rate;
  }
  double expand_gain_crop_at(int year) const {
    return year >= policy_year ? expand_gain_crop * policy.expand_gain_crop_scale
                               : expand_gain_crop;
  }
  double expand_gain_pasture_at(int year) const {
    return year >= policy_year ? expand_gain_pasture * policy.expand_gain_pasture_scale
                               : expand_gain_pasture;
  }

  bool operator==(const ModelParams&) const = default;

  // Throws ConfigError on out-of-range or inconsistent values.
  void validate() const;
};

}  // namespace foodland
