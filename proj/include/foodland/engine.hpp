#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foodland/demand.hpp"
#include "foodland/drivers.hpp"
#include "foodland/landscape.hpp"
#include "foodland/params.hpp"
#include "foodland/production.hpp"
#include "foodland/rng.hpp"

namespace foodland {

// Column layout of a recorded simulation year. Names (kColumnNames) are the
// `variable` identifiers used by the long-format timeseries CSV.
namespace cols {
enum : int {
  demand_meat = 0,
  demand_crop_food,
  demand_feed,
  demand_crop_total,
  output_crop,
  output_crop_conv,
  output_crop_org,
  output_meat,
  output_meat_planned,
  output_meat_conv,
  output_meat_org,
  feed_scaling_factor,
  tech,
  mech,
  chem,
  stock,
  eco_service,
  area_natural,
  area_crop,
  area_pasture,
  area_forest,
  area_degraded,
  crop_organic_cells,
  pasture_organic_cells,
  mean_eps_natural,
  mean_eps_crop_conv,
  mean_eps_crop_org,
  mean_eps_pasture_conv,
  mean_eps_pasture_org,
  converted_crop,
  converted_pasture,
  abandoned_crop,
  abandoned_pasture,
  conversion_shortage,
  saturation_events,
  count
};
}  // namespace cols

extern const std::array<const char*, cols::count> kColumnNames;

struct YearRow {
  int year = 0;
  std::array<double, cols::count> v{};
};

struct RunRecord {
  std::vector<YearRow> rows;
  const YearRow& at_year(int year) const;  // throws ModelError when absent
};

struct CellSnapshot {
  int x, y;
  LandUse use;
  Management mgmt;
  double eps;
};

// One simulation run. Construction initializes the landscape and records the
// start-year row (initial-condition snapshot: production evaluated on the
// fresh landscape, no land change, no integrity decay). Each step() advances
// one year.
class Simulation {
 public:
  Simulation(const ModelParams& params, const Drivers& drivers, std::uint64_t seed);

  int year() const { return year_; }
  const Landscape& landscape() const { return land_; }
  const InputLevels& inputs() const { return inputs_; }
  const YearRow& last_row() const { return last_row_; }
  const DemandModel& demand() const { return demand_; }

  // Advances one year; throws ModelError at the end of the timeline.
  const YearRow& step();

  std::vector<CellSnapshot> snapshot() const;

 private:
  std::pair<double, double> organic_shares_at(int year) const;

  ModelParams params_;
  const Drivers* drivers_;
  Rng rng_;
  Landscape land_;
  DemandModel demand_;
  InputLevels inputs_;
  int year_;
  YearRow last_row_;
  // previous-period records driving feedback and gap responses
  double last_demand_meat_, last_output_meat_;
  double last_demand_crop_, last_output_crop_;  // total crop (food + feed)
  double last_feed_;
  std::optional<double> stock_policy_cap_;
  double organic_share_crop_policy_, organic_share_pasture_policy_;
};

RunRecord run_single(const ModelParams& params, const Drivers& drivers, std::uint64_t seed);

struct RunOutput {
  RunRecord record;
  std::vector<std::pair<int, std::vector<CellSnapshot>>> snapshots;  // by year
};
RunOutput run_single_with_snapshots(const ModelParams& params, const Drivers& drivers,
                                    std::uint64_t seed, const std::vector<int>& years);

struct FailedRun {
  int index;
  std::uint64_t seed;
  std::string message;
};

// Ensemble aggregate: per-year, per-column mean and standard error of the
// mean (sample sd / sqrt(n), 0 for n = 1). NaN entries (undefined subset
// means) are skipped; a column with no defined values stays NaN.
struct EnsembleResult {
  std::vector<int> years;
  std::vector<std::array<double, cols::count>> mean;
  std::vector<std::array<double, cols::count>> stderr_;
  std::vector<std::array<int, cols::count>> n_defined;
  std::vector<RunRecord> runs;  // retained only when requested
  std::vector<FailedRun> failed;

  int year_index(int year) const;  // throws ModelError when absent
  double mean_at(int year, int col) const;
  double stderr_at(int year, int col) const;
};

// Deterministic reduction: iterates records in vector order with high-
// precision accumulation, so any permutation of equal records agrees to
// floating-point roundoff.
EnsembleResult aggregate_records(std::vector<RunRecord> records, bool keep_runs);

// Runs n_runs independent simulations with per-run seeds derived from
// master_seed (seed i depends only on (master_seed, i)) across n_threads
// workers, then aggregates in run-index order. A failed run aborts the
// ensemble unless keep_going, in which case it is dropped and reported.
EnsembleResult run_ensemble(const ModelParams& params, const Drivers& drivers, int n_runs,
                            std::uint64_t master_seed, int n_threads, bool keep_going,
                            bool keep_runs);

// Percent change of a scenario mean against a baseline mean at one cell of
// the aggregate; empty when the baseline mean is zero or undefined.
std::optional<double> percent_delta(double scenario_value, double baseline_value);

// Long-format CSV: year,variable,mean,stderr with 9 significant digits.
std::string timeseries_csv(const EnsembleResult& ens);

// Per-cell CSV: x,y,land_use,management,epsilon.
std::string snapshot_csv(const std::vector<CellSnapshot>& cells);

}  // namespace foodland
