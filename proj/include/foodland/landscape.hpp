#pragma once

#include <array>
#include <vector>

#include "foodland/params.hpp"
#include "foodland/rng.hpp"

namespace foodland {

enum class LandUse : unsigned char { natural = 0, crop = 1, pasture = 2 };
enum class Management : unsigned char { conventional = 0, organic = 1 };

struct Cell {
  LandUse use;
  Management mgmt;       // meaningful for agricultural cells only
  double eps;            // ecosystem integrity
  double theta_natural;  // recovery rate while natural
  double theta_crop;     // degradation rate while cropland
  double theta_pasture;  // degradation rate while pasture
};

struct LandscapeMetrics {
  int area_natural = 0;
  int area_crop = 0;
  int area_pasture = 0;
  int area_forest = 0;    // natural cells with eps above forest_threshold
  int area_degraded = 0;  // any cells with eps below degraded_threshold
  int crop_organic = 0;
  int pasture_organic = 0;
  // subset means are NaN when the subset is empty
  double mean_eps_natural;
  double mean_eps_crop_conv;
  double mean_eps_crop_org;
  double mean_eps_pasture_conv;
  double mean_eps_pasture_org;
  double natural_eps_sum = 0.0;
};

// Boolean field with spatial autocorrelation of characteristic length xi:
// white noise smoothed by a separable Gaussian kernel on a torus, then
// thresholded so that exactly round(fraction * w * h) cells are set.
std::vector<char> correlated_mask(int w, int h, double xi, double fraction, Rng& rng);

// Aggregate inputs applied during an integrity update step.
struct IntegrityPressure {
  double mech;           // mechanization level
  double chem;           // chemical input level
  double stock;          // livestock density
  double service;        // aggregate ecosystem service E
};

class Landscape {
 public:
  Landscape() = default;  // empty landscape; assign from initialize()

  // Builds the initial landscape: correlated natural mask at share_natural,
  // remaining cells split pasture:crop at exact rounded counts, per-cell rates
  // sampled from the lifespan distributions, natural cells at eps_max,
  // agricultural cells at 1.0, all conventional.
  static Landscape initialize(const ModelParams& params, Rng& rng);

  int width() const { return w_; }
  int height() const { return h_; }
  int size() const { return (int)cells_.size(); }
  const Cell& cell(int idx) const { return cells_[idx]; }
  const std::vector<Cell>& cells() const { return cells_; }

  int area(LandUse u) const { return area_[(int)u]; }
  int organic_count(LandUse u) const { return organic_[(int)u]; }
  double initial_natural_eps_sum() const { return eps0_natural_sum_; }

  // Converts up to `count` natural cells to `target`, picking the highest-eps
  // cells (uniform random tie-break). Converted cells become conventional and
  // their eps is clamped to at most 1. Returns the number actually converted
  // (less than `count` when the natural pool runs short).
  int convert_cells(LandUse target, int count, Rng& rng);

  // Returns the `count` lowest-eps cells of the given agricultural class to
  // natural land (uniform random tie-break), retaining their eps. Returns the
  // number actually abandoned.
  int abandon_cells(LandUse from, int count, Rng& rng);

  // Promotes random conventional cells so each agricultural class holds at
  // least round(share * class area) organic cells. Organic cells are never
  // demoted; a surplus (after class shrinkage) is left in place.
  void set_organic_share(double share_crop, double share_pasture, Rng& rng);

  // One year of integrity dynamics. Pasture degrades with the livestock
  // density (capped on organic cells when organic_lambda_cap), cropland with
  // mechanization plus chemicals (chemicals skipped on organic cells when
  // organic_crop_phi_exempt), natural cells follow the response selected by
  // natural_sign. A non-positive multiplier clamps the cell to eps_min and is
  // counted; the return value is the number of such saturation events.
  int update_integrity(const IntegrityPressure& pr, const ModelParams& params);

  // E = (current natural integrity sum / initial natural integrity sum)^p.
  // With no natural cells left the numerator degenerates to eps_min.
  double ecosystem_service(const ModelParams& params) const;

  LandscapeMetrics metrics(const ModelParams& params) const;

  // Verifies cached area/organic counts against a full recount; throws
  // ModelError on mismatch. Used by tests and debug checks.
  void check_consistency() const;

 private:
  int w_ = 0, h_ = 0;
  std::vector<Cell> cells_;
  std::array<int, 3> area_{};     // indexed by LandUse
  std::array<int, 3> organic_{};  // organic counts (crop/pasture entries used)
  double eps0_natural_sum_ = 0.0;

  // scratch buffer reused by selection ops to avoid per-step allocation
  std::vector<std::pair<double, int>> scratch_;
};

}  // namespace foodland
